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

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "qdsim/errors.hpp"

namespace qdsim {
namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_schedule_csv(in);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ScheduleCsv, WritesHeaderAndRows) {
  PulseSchedule s;
  s.records.push_back({0, {170.0, 70.0, 2.5}});
  std::ostringstream out;
  write_schedule_csv(out, s);
  EXPECT_EQ(out.str(), "step,eps0_ghz,eps1_ghz,tunnel_ghz\n0,170,70,2.5\n");
}

TEST(ScheduleCsv, EmptyScheduleIsHeaderOnly) {
  std::ostringstream out;
  write_schedule_csv(out, PulseSchedule{});
  std::istringstream in(out.str());
  EXPECT_TRUE(read_schedule_csv(in).empty());
}

TEST(ScheduleCsvProperty, RoundTripIsExact) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> eps(-750.0, 750.0), tun(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    PulseSchedule s;
    for (int k = 0; k < 37; ++k) s.records.push_back({k, {eps(rng), eps(rng), tun(rng)}});
    std::stringstream buf;
    write_schedule_csv(buf, s);
    const PulseSchedule back = read_schedule_csv(buf);
    ASSERT_EQ(back.records, s.records);
  }
}

TEST(ScheduleCsv, RejectsWrongHeader) {
  EXPECT_NE(error_of("step,eps0,eps1,tunnel\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("").find("line 1"), std::string::npos);
}

TEST(ScheduleCsv, ReportsLineOfMalformedRow) {
  const std::string header = std::string(kScheduleCsvHeader) + "\n";
  EXPECT_NE(error_of(header + "0,1,2,3\n1,1,2\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(header + "0,1,x,3\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of(header + "0,1,2,3\n2,1,2,3\n").find("line 3"), std::string::npos);
}

}  // namespace
}  // namespace qdsim
