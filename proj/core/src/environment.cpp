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

#include "qdsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdsim/errors.hpp"
#include "qdsim/evolution.hpp"

namespace qdsim::env {
namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation("EnvConfig." + what);
}

bool clip(double& v, double lo, double hi) {
  if (v < lo) {
    v = lo;
    return true;
  }
  if (v > hi) {
    v = hi;
    return true;
  }
  return false;
}

}  // namespace

void EnvConfig::validate() const {
  check(bounds.eps_min < bounds.eps_max, "eps_bounds must be ordered");
  check(bounds.tun_min < bounds.tun_max, "tun_bounds must be ordered");
  for (double e : eps_init) {
    check(e >= bounds.eps_min && e <= bounds.eps_max, "eps_init outside eps_bounds");
  }
  check(tun_init >= bounds.tun_min && tun_init <= bounds.tun_max, "tun_init outside tun_bounds");
  check(u[0] >= 0.0 && u[1] >= 0.0, "u must be non-negative");
  check(ez[0] >= 0.0 && ez[1] >= 0.0, "ez must be non-negative");
  check(dt_ns > 0.0, "dt must be positive");
  check(max_steps >= 1, "max_steps must be at least 1");
  check(f_terminal > 0.0 && f_terminal <= f_bonus && f_bonus < 1.0,
        "fidelity thresholds must satisfy 0 < f_terminal <= f_bonus < 1");
  check(step_sizes[0] > 0.0 && step_sizes[1] > 0.0 && step_sizes[2] > 0.0,
        "step_sizes must be positive");
  check(step_sizes[0] >= step_sizes[1] && step_sizes[1] >= step_sizes[2],
        "step_sizes must be non-increasing");
  check(step_thresholds[0] <= step_thresholds[1], "step_thresholds must be ordered");
}

std::size_t EnvConfig::observation_size() const {
  const std::size_t d = obs_mode == ObsMode::kComputational4 ? kQubitDim : kFockDim;
  return 2 * d * d + 1;
}

HamiltonianParams EnvConfig::params_at(const Controls& c) const {
  HamiltonianParams p;
  p.eps = {c.eps0, c.eps1};
  p.tun = c.tun;
  p.u = u;
  p.ez = ez;
  return p;
}

ControlDelta decode_action(int index, double step) {
  if (index < 0 || index >= static_cast<int>(kNumDiscreteActions)) {
    throw ContractViolation("decode_action: index " + std::to_string(index) +
                            " outside [0, 26]");
  }
  auto digit = [step](int d) { return d == 0 ? 0.0 : (d == 1 ? step : -step); };
  return {digit(index % 3), digit((index / 3) % 3), digit((index / 9) % 3)};
}

double compute_reward(const EnvConfig& cfg, double fidelity, bool boundary_hit, bool terminated) {
  double r = cfg.r_step;
  if (boundary_hit) r += cfg.r_boundary;
  if (terminated) r += (fidelity > cfg.f_bonus ? cfg.r_bonus : cfg.r_success) * fidelity;
  return r;
}

EnvObservation make_observation(const EnvConfig& cfg, const UnitaryMatrix& u16,
                                const CompensatedGate& gate) {
  const ComplexMatrix& m =
      cfg.obs_mode == ObsMode::kComputational4 ? gate.gate.matrix() : u16.matrix();
  EnvObservation obs;
  obs.features.reserve(cfg.observation_size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      obs.features.push_back(m(r, c).real());
      obs.features.push_back(m(r, c).imag());
    }
  }
  obs.features.push_back(gate.report.fidelity);
  return obs;
}

GateEnv::GateEnv(EnvConfig cfg)
    : cfg_(std::move(cfg)), target_(cz_gate()), u_acc_(UnitaryMatrix::identity(kFockDim)) {
  cfg_.validate();
}

EnvObservation GateEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  controls_ = {cfg_.eps_init[0], cfg_.eps_init[1], cfg_.tun_init};
  u_acc_ = UnitaryMatrix::identity(kFockDim);
  step_size_ = cfg_.step_sizes[0];
  steps_ = 0;
  started_ = true;
  finished_ = false;
  schedule_.records.clear();
  const CompensatedGate gate = evaluate_gate(u_acc_, target_);
  fidelity_ = gate.report.fidelity;
  return make_observation(cfg_, u_acc_, gate);
}

void GateEnv::require_running(const char* op) const {
  if (!started_) throw ContractViolation(std::string(op) + " before reset");
  if (finished_) throw ContractViolation(std::string(op) + " after the episode ended");
}

StepResult GateEnv::step_discrete(int action) {
  require_running("step_discrete");
  const ControlDelta delta = decode_action(action, step_size_);
  Controls next{controls_.eps0 + delta.eps0, controls_.eps1 + delta.eps1,
                controls_.tun + delta.tun};
  bool hit = false;
  hit |= clip(next.eps0, cfg_.bounds.eps_min, cfg_.bounds.eps_max);
  hit |= clip(next.eps1, cfg_.bounds.eps_min, cfg_.bounds.eps_max);
  hit |= clip(next.tun, cfg_.bounds.tun_min, cfg_.bounds.tun_max);
  return advance(next, hit, step_size_);
}

StepResult GateEnv::step_continuous(std::span<const double> action) {
  require_running("step_continuous");
  if (action.size() != kNumControls) {
    throw ContractViolation("step_continuous expects 3 action components, got " +
                            std::to_string(action.size()));
  }
  bool hit = false;
  std::array<double, kNumControls> a{};
  for (std::size_t k = 0; k < kNumControls; ++k) {
    if (!std::isfinite(action[k])) {
      throw ContractViolation("step_continuous: non-finite action component");
    }
    a[k] = action[k];
    hit |= clip(a[k], -1.0, 1.0);
  }
  auto map = [](double x, double lo, double hi) { return lo + 0.5 * (x + 1.0) * (hi - lo); };
  const Controls next{map(a[0], cfg_.bounds.eps_min, cfg_.bounds.eps_max),
                      map(a[1], cfg_.bounds.eps_min, cfg_.bounds.eps_max),
                      map(a[2], cfg_.bounds.tun_min, cfg_.bounds.tun_max)};
  return advance(next, hit, 0.0);
}

StepResult GateEnv::advance(const Controls& next, bool boundary_hit, double step_used) {
  controls_ = next;
  const UnitaryMatrix step_u = evolve_step(build_hamiltonian(cfg_.params_at(controls_), cfg_.bounds),
                                           cfg_.dt_ns);
  u_acc_ = accumulate(step_u, u_acc_);
  schedule_.records.push_back({steps_, controls_});
  ++steps_;

  const CompensatedGate gate = evaluate_gate(u_acc_, target_);
  fidelity_ = gate.report.fidelity;

  if (fidelity_ > cfg_.step_thresholds[1]) {
    step_size_ = std::min(step_size_, cfg_.step_sizes[2]);
  } else if (fidelity_ > cfg_.step_thresholds[0]) {
    step_size_ = std::min(step_size_, cfg_.step_sizes[1]);
  }

  StepResult out;
  out.terminated = fidelity_ > cfg_.f_terminal;
  out.truncated = !out.terminated && steps_ >= cfg_.max_steps;
  out.reward = compute_reward(cfg_, fidelity_, boundary_hit, out.terminated);
  out.observation = make_observation(cfg_, u_acc_, gate);
  out.info.fidelity = fidelity_;
  out.info.gate_duration_ns = steps_ * cfg_.dt_ns;
  out.info.controls = controls_;
  out.info.boundary_hit = boundary_hit;
  out.info.compensated = gate.compensated;
  out.info.step_size = step_used;
  finished_ = out.done();
  return out;
}

PulseSchedule GateEnv::export_schedule() const { return schedule_; }

}  // namespace qdsim::env
