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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdsim/gate.hpp"
#include "qdsim/hamiltonian.hpp"
#include "qdsim/matrix.hpp"
#include "qdsim/schedule.hpp"

namespace qdsim::env {

enum class ObsMode { kComputational4, kFull16 };

inline constexpr std::size_t kNumDiscreteActions = 27;
inline constexpr std::size_t kNumControls = 3;

struct EnvConfig {
  std::array<double, 2> eps_init{170.0, 70.0};
  double tun_init = 2.5;
  ParamBounds bounds{};
  std::array<double, 2> u{845.2, 845.2};
  std::array<double, 2> ez{18.4, 19.7};
  double dt_ns = 1.0;
  int max_steps = 200;
  double f_terminal = 0.99;
  double f_bonus = 0.999;
  double r_step = -1.0;
  double r_boundary = -1.0;
  double r_success = 100.0;
  double r_bonus = 500.0;
  ObsMode obs_mode = ObsMode::kComputational4;
  // Adaptive control step-size for discrete actions: step_sizes[k + 1] takes
  // over once fidelity exceeds step_thresholds[k].
  std::array<double, 3> step_sizes{1.0, 0.1, 0.01};
  std::array<double, 2> step_thresholds{0.99, 0.999};

  // Throws ContractViolation naming the offending field.
  void validate() const;

  std::size_t observation_size() const;
  HamiltonianParams params_at(const Controls& c) const;
};

struct EnvObservation {
  std::vector<double> features;
};

struct StepInfo {
  double fidelity = 0.0;
  double gate_duration_ns = 0.0;
  Controls controls{};
  bool boundary_hit = false;
  bool compensated = true;
  double step_size = 0.0;  // control step-size used by this step (discrete mode)
};

struct StepResult {
  EnvObservation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;

  bool done() const { return terminated || truncated; }
};

struct ControlDelta {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double tun = 0.0;

  friend bool operator==(const ControlDelta&, const ControlDelta&) = default;
};

// Base-3 digits of `index` select (eps0, eps1, tunnel) changes; digit 0 keeps
// the control, 1 adds `step`, 2 subtracts it.
ControlDelta decode_action(int index, double step);

double compute_reward(const EnvConfig& cfg, double fidelity, bool boundary_hit, bool terminated);

// Observation features: compensated (or raw) gate matrix flattened row-major
// with real and imaginary parts interleaved, followed by the fidelity.
EnvObservation make_observation(const EnvConfig& cfg, const UnitaryMatrix& u16,
                                const CompensatedGate& gate);

// Piecewise-constant pulse environment over the double-dot simulator. One
// step applies one control update and evolves dt (1 ns). Not thread-safe;
// give each worker its own instance.
class GateEnv {
 public:
  explicit GateEnv(EnvConfig cfg);

  // Seed is recorded only; the dynamics are deterministic.
  EnvObservation reset(std::uint64_t seed = 0);
  StepResult step_discrete(int action);
  StepResult step_continuous(std::span<const double> action);

  PulseSchedule export_schedule() const;

  const EnvConfig& config() const { return cfg_; }
  const Controls& controls() const { return controls_; }
  const UnitaryMatrix& accumulated() const { return u_acc_; }
  double step_size() const { return step_size_; }
  double fidelity() const { return fidelity_; }
  int steps_taken() const { return steps_; }
  bool finished() const { return finished_; }
  std::uint64_t seed() const { return seed_; }

 private:
  StepResult advance(const Controls& next, bool boundary_hit, double step_used);
  void require_running(const char* op) const;

  EnvConfig cfg_;
  UnitaryMatrix target_;
  Controls controls_{};
  UnitaryMatrix u_acc_;
  double step_size_ = 1.0;
  double fidelity_ = 0.0;
  int steps_ = 0;
  bool started_ = false;
  bool finished_ = false;
  std::uint64_t seed_ = 0;
  PulseSchedule schedule_;
};

}  // namespace qdsim::env
