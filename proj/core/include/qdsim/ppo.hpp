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
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdsim/adam.hpp"
#include "qdsim/best_gate.hpp"
#include "qdsim/environment.hpp"
#include "qdsim/mlp.hpp"

namespace qdsim::rl {

struct PpoConfig {
  double gamma = 0.9;
  double lambda = 0.95;
  double clip_eps = 0.2;
  double lr = 1e-3;
  int horizon = 200;  // steps per worker per iteration
  int n_envs = 8;
  int epochs_per_iter = 10;
  int minibatch = 64;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  int iterations_max = 2000;
  double log_std_init = -0.6931471805599453;  // log(0.5)
  bool state_dependent_std = false;
  bool normalize_advantages = true;
  bool parallel = true;
  // Stop once an episode ends above the environment's f_bonus within this
  // many ns (0 = never stop early).
  double stop_at_duration_ns = 0.0;

  void validate() const;
};

struct Transition {
  std::vector<double> observation;
  std::array<double, env::kNumControls> action{};  // pre-clip sample, normalized space
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool terminated = false;
  bool truncated = false;
  // V(final state) of an episode cut by the step cap inside the trajectory.
  double truncation_value = 0.0;
};

// Ordered rollout of one worker. Episodes may end inside it; the last
// record needs `bootstrap_value` unless it is terminated.
struct Trajectory {
  std::vector<Transition> steps;
  std::optional<double> bootstrap_value;
};

struct AdvantageEstimate {
  std::vector<double> advantages;  // raw (not normalized)
  std::vector<double> returns;     // advantages + values
};

// Generalized advantage estimation, reset at episode boundaries inside the
// trajectory. Throws ContractViolation when a bootstrap value is missing.
AdvantageEstimate gae(const Trajectory& traj, double gamma, double lambda);

// In-place shift/scale to mean 0, std 1 (no-op scale when std is ~0).
void normalize(std::vector<double>& values);

// min(ratio * adv, clip(ratio, 1 - eps, 1 + eps) * adv)
double clipped_surrogate(double ratio, double advantage, double clip_eps);

struct PpoBatch {
  nn::Matrix observations;  // in x B
  nn::Matrix actions;       // 3 x B
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return old_log_probs.size(); }
};

struct PolicyParameters {
  nn::MlpParameters network;    // outputs 3 means (+ 3 log-stds if state dependent)
  std::vector<double> log_std;  // used when the std is state independent
  bool state_dependent_std = false;
};

struct PpoLoss {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  nn::GradientSet policy_grad;
  std::vector<double> log_std_grad;
  nn::GradientSet value_grad;
};

// Clipped-surrogate loss plus value regression and entropy bonus, with exact
// gradients. Throws NumericalError on a non-finite probability ratio.
PpoLoss ppo_loss(const PpoBatch& batch, const PolicyParameters& policy,
                 const nn::MlpParameters& value, const PpoConfig& cfg);

struct ActionDistribution {
  std::array<double, env::kNumControls> mean{};
  std::array<double, env::kNumControls> log_std{};
};
ActionDistribution policy_distribution(const PolicyParameters& policy,
                                       std::span<const double> observation);

struct IterationStats {
  int iteration = 0;
  int samples = 0;
  int episodes = 0;  // episodes that ended during this iteration
  double mean_return = 0.0;
  double mean_final_fidelity = 0.0;
  double iteration_best_fidelity = 0.0;
  double best_fidelity = 0.0;   // fidelity of the best gate so far
  double best_duration_ns = 0.0;
  double shortest_success_ns = 0.0;  // 0 when no success yet
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double mean_log_std = 0.0;
  double wall_ms = 0.0;
};

struct PpoResult {
  PolicyParameters policy;
  nn::MlpParameters value;
  std::vector<IterationStats> iterations;
  BestGateTracker best{0.999};
  bool stopped_early = false;
};

using EnvFactory = std::function<env::GateEnv()>;
using IterationCallback = std::function<void(const IterationStats&)>;

// Parallel-rollout PPO on the continuous-action environment. Workers own
// their environments and random streams (derived from seed and worker
// index), read a snapshot of the policy, and are merged by index, so the
// result does not depend on thread scheduling.
PpoResult train_ppo(const EnvFactory& make_env, const PpoConfig& cfg, std::uint64_t seed,
                    const IterationCallback& on_iteration = {});

}  // namespace qdsim::rl
