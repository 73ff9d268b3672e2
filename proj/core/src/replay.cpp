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

#include "qdsim/replay.hpp"

#include <string>

#include "qdsim/errors.hpp"
#include "qdsim/evolution.hpp"
#include "qdsim/hamiltonian.hpp"

namespace qdsim::cli {

ReplayResult run_replay(const PulseSchedule& schedule, const env::EnvConfig& cfg) {
  const UnitaryMatrix target = cz_gate();
  UnitaryMatrix acc = UnitaryMatrix::identity(kFockDim);
  ReplayResult out;
  out.fidelity_trace.reserve(schedule.size());
  for (const PulseRecord& rec : schedule.records) {
    HamiltonianParams p = cfg.params_at(rec.controls);
    try {
      p.validate(cfg.bounds);
    } catch (const ContractViolation& e) {
      throw ContractViolation("replay step " + std::to_string(rec.step) + ": " + e.what());
    }
    acc = accumulate(evolve_step(build_hamiltonian(p, cfg.bounds), cfg.dt_ns), acc);
    out.fidelity_trace.push_back(evaluate_gate(acc, target).report.fidelity);
  }
  out.final = evaluate_gate(acc, target).report;
  return out;
}

SweepResult sweep_duration(const Controls& controls, int max_steps, const env::EnvConfig& cfg) {
  if (max_steps < 1) throw ContractViolation("sweep_duration: max_steps must be >= 1");
  PulseSchedule constant;
  for (int k = 0; k < max_steps; ++k) constant.records.push_back({k, controls});
  SweepResult out;
  out.fidelity_by_duration = run_replay(constant, cfg).fidelity_trace;
  for (int k = 0; k < max_steps; ++k) {
    const double f = out.fidelity_by_duration[static_cast<std::size_t>(k)];
    if (f > out.best_fidelity) {
      out.best_fidelity = f;
      out.best_steps = k + 1;
    }
  }
  return out;
}

}  // namespace qdsim::cli
