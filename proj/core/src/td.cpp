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

#include "qdsim/td.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <string>

#include "qdsim/errors.hpp"
#include "qdsim/losses.hpp"
#include "qdsim/random.hpp"

namespace qdsim::rl {
namespace {

struct Transition {
  std::vector<double> obs;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_obs;
  int next_action = 0;  // SARSA only
  bool terminal = false;
};

nn::Matrix to_matrix(std::span<const double> x) {
  return Eigen::Map<const nn::Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
}

// One Adam step on mean((Q(s, .) - target)^2) where target equals the current
// prediction except at the taken action.
double regress(nn::MlpParameters& q, nn::AdamState& adam, const nn::AdamConfig& adam_cfg,
               const nn::Matrix& obs, const std::vector<int>& actions,
               const std::vector<double>& soft_targets) {
  const nn::ForwardResult fwd = nn::forward(q, obs);
  const auto batch = static_cast<double>(obs.cols());
  const auto outputs = static_cast<double>(q.out_dim());
  nn::Matrix d_out = nn::Matrix::Zero(fwd.output.rows(), fwd.output.cols());
  double loss = 0.0;
  for (Eigen::Index b = 0; b < obs.cols(); ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    const double diff = fwd.output(a, b) - soft_targets[static_cast<std::size_t>(b)];
    loss += diff * diff / outputs;
    d_out(a, b) = 2.0 * diff / (outputs * batch);
  }
  const nn::GradientSet g = nn::backward(q, fwd.cache, d_out);
  nn::adam_step(q, g, adam, adam_cfg);
  return loss / batch;
}

}  // namespace

void TdConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ContractViolation(std::string("TdConfig.") + what);
  };
  check(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0, 1]");
  check(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
  check(epsilon_init >= 0.0 && epsilon_init <= 1.0, "epsilon_init must be in [0, 1]");
  check(epsilon_decay > 0.0 && epsilon_decay < 1.0, "epsilon_decay must be in (0, 1)");
  check(epsilon_min >= 0.0 && epsilon_min <= 1.0, "epsilon_min must be in [0, 1]");
  check(episodes_max >= 1, "episodes_max must be >= 1");
  check(mean_window >= 1, "mean_window must be >= 1");
  check(replay_capacity == 0 || replay_batch >= 1, "replay_batch must be >= 1");
  check(target_sync_steps >= 0, "target_sync_steps must be >= 0");
}

int argmax(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax of an empty vector");
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

int epsilon_greedy(std::span<const double> qvalues, double eps, std::mt19937_64& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ContractViolation("epsilon_greedy: eps must be in [0, 1]");
  }
  if (uniform01(rng) < eps) {
    return static_cast<int>(uniform_index(rng, qvalues.size()));
  }
  return argmax(qvalues);
}

double td_target_qlearning(double reward, double gamma, std::span<const double> q_next, bool done) {
  if (done) return reward;
  return reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

double td_target_sarsa(double reward, double gamma, double q_next_at_action, bool done) {
  return done ? reward : reward + gamma * q_next_at_action;
}

double epsilon_after(const TdConfig& cfg, int episodes) {
  double eps = cfg.epsilon_init;
  for (int k = 0; k < episodes; ++k) eps = std::max(cfg.epsilon_min, eps * cfg.epsilon_decay);
  return eps;
}

TdResult train_td(env::GateEnv& environment, TdAlgorithm algo, const TdConfig& cfg,
                  std::uint64_t seed, const EpisodeCallback& on_episode) {
  cfg.validate();
  const env::EnvConfig& ecfg = environment.config();
  const int in_dim = static_cast<int>(ecfg.observation_size());
  const int out_dim = static_cast<int>(env::kNumDiscreteActions);

  TdResult result;
  result.best = BestGateTracker(ecfg.f_bonus);
  result.q_network = nn::init_mlp(in_dim, out_dim, derive_seed(seed, 1));
  nn::MlpParameters& q = result.q_network;
  nn::MlpParameters target_net = q;
  nn::AdamState adam(q.size());
  std::mt19937_64 rng = make_rng(seed, 2);
  std::mt19937_64 replay_rng = make_rng(seed, 3);
  std::deque<Transition> replay;
  std::int64_t total_steps = 0;

  const nn::MlpParameters& bootstrap_net = cfg.target_sync_steps > 0 ? target_net : q;
  double eps = cfg.epsilon_init;
  std::deque<double> window;

  for (int episode = 0; episode < cfg.episodes_max; ++episode) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> obs = environment.reset(derive_seed(seed, 100 + episode)).features;
    nn::Vector q_obs = nn::predict(q, obs);
    int action = epsilon_greedy({q_obs.data(), static_cast<std::size_t>(q_obs.size())}, eps, rng);

    EpisodeStats stats;
    stats.episode = episode;
    stats.epsilon = eps;
    double loss_sum = 0.0;
    env::StepResult step;
    do {
      step = environment.step_discrete(action);
      const std::vector<double>& next_obs = step.observation.features;
      const nn::Vector q_next = nn::predict(bootstrap_net, next_obs);
      const std::span<const double> q_next_span(q_next.data(), static_cast<std::size_t>(q_next.size()));

      int next_action = 0;
      if (!step.done()) {
        // Behaviour policy for the next step; SARSA also bootstraps from it.
        const nn::Vector q_behave =
            cfg.target_sync_steps > 0 ? nn::predict(q, next_obs) : q_next;
        next_action = epsilon_greedy(
            {q_behave.data(), static_cast<std::size_t>(q_behave.size())}, eps, rng);
      }

      if (cfg.replay_capacity == 0) {
        const double y =
            algo == TdAlgorithm::kQLearning
                ? td_target_qlearning(step.reward, cfg.gamma, q_next_span, step.terminated)
                : td_target_sarsa(step.reward, cfg.gamma, q_next(next_action), step.terminated);
        const double soft = (1.0 - cfg.alpha) * q_obs(action) + cfg.alpha * y;
        loss_sum += regress(q, adam, cfg.adam, to_matrix(obs), {action}, {soft});
      } else {
        replay.push_back({obs, action, step.reward, next_obs, next_action, step.terminated});
        if (replay.size() > cfg.replay_capacity) replay.pop_front();
        const std::size_t batch = std::min<std::size_t>(replay.size(),
                                                        static_cast<std::size_t>(cfg.replay_batch));
        nn::Matrix batch_obs(in_dim, static_cast<Eigen::Index>(batch));
        std::vector<int> actions(batch);
        std::vector<double> soft(batch);
        for (std::size_t b = 0; b < batch; ++b) {
          const Transition& tr = replay[uniform_index(replay_rng, replay.size())];
          batch_obs.col(static_cast<Eigen::Index>(b)) = to_matrix(tr.obs);
          const nn::Vector qs = nn::predict(q, tr.obs);
          const nn::Vector qn = nn::predict(bootstrap_net, tr.next_obs);
          const double y =
              algo == TdAlgorithm::kQLearning
                  ? td_target_qlearning(tr.reward, cfg.gamma,
                                        {qn.data(), static_cast<std::size_t>(qn.size())},
                                        tr.terminal)
                  : td_target_sarsa(tr.reward, cfg.gamma, qn(tr.next_action), tr.terminal);
          actions[b] = tr.action;
          soft[b] = (1.0 - cfg.alpha) * qs(tr.action) + cfg.alpha * y;
        }
        loss_sum += regress(q, adam, cfg.adam, batch_obs, actions, soft);
      }

      ++total_steps;
      if (cfg.target_sync_steps > 0 && total_steps % cfg.target_sync_steps == 0) target_net = q;

      stats.episode_return += step.reward;
      obs = next_obs;
      action = next_action;
      if (!step.done()) q_obs = nn::predict(q, obs);
    } while (!step.done());

    stats.final_fidelity = step.info.fidelity;
    stats.gate_duration_ns = step.info.gate_duration_ns;
    stats.steps = environment.steps_taken();
    stats.terminated = step.terminated;
    stats.mean_loss = loss_sum / stats.steps;
    result.best.consider(environment.export_schedule(), stats.final_fidelity,
                         stats.gate_duration_ns);
    stats.best_fidelity = result.best.max_fidelity();

    window.push_back(stats.final_fidelity);
    if (static_cast<int>(window.size()) > cfg.mean_window) window.pop_front();
    double window_sum = 0.0;
    for (double f : window) window_sum += f;
    stats.trailing_mean_fidelity = window_sum / static_cast<double>(window.size());
    stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    result.episodes.push_back(stats);
    if (on_episode) on_episode(stats);

    eps = std::max(cfg.epsilon_min, eps * cfg.epsilon_decay);

    if (static_cast<int>(window.size()) == cfg.mean_window &&
        stats.trailing_mean_fidelity > cfg.target_mean_fidelity) {
      result.reached_target = true;
      if (cfg.stop_at_target) break;
    }
  }
  return result;
}

}  // namespace qdsim::rl
