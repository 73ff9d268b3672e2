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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdsim {

// Control values applied during one 1 ns step, GHz.
struct Controls {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double tun = 0.0;

  double detuning() const { return eps0 - eps1; }
  friend bool operator==(const Controls&, const Controls&) = default;
};

struct PulseRecord {
  int step = 0;
  Controls controls;

  friend bool operator==(const PulseRecord&, const PulseRecord&) = default;
};

// Piecewise-constant control pulse at 1 ns resolution.
struct PulseSchedule {
  std::vector<PulseRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// CSV with header `step,eps0_ghz,eps1_ghz,tunnel_ghz`; values are written
// with 17 significant digits so a round trip is exact.
inline constexpr const char* kScheduleCsvHeader = "step,eps0_ghz,eps1_ghz,tunnel_ghz";

void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule);
void write_schedule_csv(const std::filesystem::path& path, const PulseSchedule& schedule);

// Throws ConfigError with the 1-based line number on malformed input.
PulseSchedule read_schedule_csv(std::istream& in);
PulseSchedule read_schedule_csv(const std::filesystem::path& path);

}  // namespace qdsim
