// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdsim/schedule.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "qdsim/errors.hpp"

namespace qdsim {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view text, int line, const char* name) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("schedule line " + std::to_string(line) + ": cannot parse " + name +
                      " from '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule) {
  out << kScheduleCsvHeader << '\n';
  for (const auto& r : schedule.records) {
    out << r.step << ',' << format_double(r.controls.eps0) << ','
        << format_double(r.controls.eps1) << ',' << format_double(r.controls.tun) << '\n';
  }
}

void write_schedule_csv(const std::filesystem::path& path, const PulseSchedule& schedule) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_schedule_csv(out, schedule);
}

PulseSchedule read_schedule_csv(std::istream& in) {
  PulseSchedule schedule;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || trim(line) != kScheduleCsvHeader) {
    throw ConfigError("schedule line 1: expected header '" + std::string(kScheduleCsvHeader) + "'");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::string_view fields[4];
    for (int f = 0; f < 4; ++f) {
      const auto comma = rest.find(',');
      if (f < 3 && comma == std::string_view::npos) {
        throw ConfigError("schedule line " + std::to_string(line_no) + ": expected 4 columns");
      }
      if (f == 3 && comma != std::string_view::npos) {
        throw ConfigError("schedule line " + std::to_string(line_no) + ": too many columns");
      }
      fields[f] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    PulseRecord rec;
    rec.step = parse_field<int>(fields[0], line_no, "step");
    rec.controls.eps0 = parse_field<double>(fields[1], line_no, "eps0_ghz");
    rec.controls.eps1 = parse_field<double>(fields[2], line_no, "eps1_ghz");
    rec.controls.tun = parse_field<double>(fields[3], line_no, "tunnel_ghz");
    if (rec.step != static_cast<int>(schedule.records.size())) {
      throw ConfigError("schedule line " + std::to_string(line_no) + ": step index " +
                        std::to_string(rec.step) + " out of sequence");
    }
    schedule.records.push_back(rec);
  }
  return schedule;
}

PulseSchedule read_schedule_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schedule " + path.string());
  return read_schedule_csv(in);
}

}  // namespace qdsim
