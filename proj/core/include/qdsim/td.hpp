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

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "qdsim/adam.hpp"
#include "qdsim/best_gate.hpp"
#include "qdsim/environment.hpp"
#include "qdsim/mlp.hpp"

namespace qdsim::rl {

enum class TdAlgorithm { kQLearning, kSarsa };

struct TdConfig {
  double alpha = 0.1;  // soft-target mixing: regress toward (1 - alpha) Q + alpha y
  double gamma = 0.9;
  double epsilon_init = 1.0;
  double epsilon_decay = 0.995;  // applied once per episode
  double epsilon_min = 0.01;
  int episodes_max = 5000;
  double target_mean_fidelity = 0.99;
  int mean_window = 10;
  bool stop_at_target = true;
  nn::AdamConfig adam{};

  // Off by default: online updates from the latest transition only.
  std::size_t replay_capacity = 0;
  int replay_batch = 32;
  int target_sync_steps = 0;  // 0 = bootstrap from the online network

  void validate() const;
};

struct EpisodeStats {
  int episode = 0;
  double episode_return = 0.0;
  double final_fidelity = 0.0;
  double best_fidelity = 0.0;  // best episode-final fidelity so far in the run
  double gate_duration_ns = 0.0;
  int steps = 0;
  bool terminated = false;
  double epsilon = 0.0;  // value used during this episode
  double mean_loss = 0.0;
  double trailing_mean_fidelity = 0.0;  // over the last mean_window episodes (or fewer)
  double wall_ms = 0.0;
};

// Uniform over all actions with probability eps, argmax otherwise (lowest
// index on ties).
int epsilon_greedy(std::span<const double> qvalues, double eps, std::mt19937_64& rng);

int argmax(std::span<const double> values);

double td_target_qlearning(double reward, double gamma, std::span<const double> q_next, bool done);
double td_target_sarsa(double reward, double gamma, double q_next_at_action, bool done);

// epsilon after `episodes` per-episode decays
double epsilon_after(const TdConfig& cfg, int episodes);

struct TdResult {
  nn::MlpParameters q_network;
  std::vector<EpisodeStats> episodes;
  BestGateTracker best{0.999};
  bool reached_target = false;
};

using EpisodeCallback = std::function<void(const EpisodeStats&)>;

// Online deep Q-learning / deep SARSA on a discrete-action environment. The
// whole run is a pure function of (env config, cfg, seed).
TdResult train_td(env::GateEnv& environment, TdAlgorithm algo, const TdConfig& cfg,
                  std::uint64_t seed, const EpisodeCallback& on_episode = {});

}  // namespace qdsim::rl
