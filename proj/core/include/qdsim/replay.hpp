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

#include <vector>

#include "qdsim/environment.hpp"
#include "qdsim/gate.hpp"
#include "qdsim/schedule.hpp"

namespace qdsim::cli {

struct ReplayResult {
  FidelityReport final;
  std::vector<double> fidelity_trace;  // after each step
};

// Evolves `schedule` through the simulator alone (no environment, no agent)
// using the physics constants, bounds and dt of `cfg`, scoring against CZ
// with the same project/compensate pipeline as the environment. Throws
// ContractViolation on an out-of-bounds control value.
ReplayResult run_replay(const PulseSchedule& schedule, const env::EnvConfig& cfg);

struct SweepResult {
  std::vector<double> fidelity_by_duration;  // index k -> duration (k + 1) * dt
  int best_steps = 0;
  double best_fidelity = 0.0;
};

// Constant `controls` held for 1..max_steps steps; exhaustive duration scan.
SweepResult sweep_duration(const Controls& controls, int max_steps, const env::EnvConfig& cfg);

}  // namespace qdsim::cli
