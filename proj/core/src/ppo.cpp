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

#include "qdsim/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "qdsim/errors.hpp"
#include "qdsim/losses.hpp"
#include "qdsim/random.hpp"

namespace qdsim::rl {
namespace {

constexpr std::size_t kActDim = env::kNumControls;

struct EpisodeSummary {
  double episode_return = 0.0;
  double fidelity = 0.0;
  double duration_ns = 0.0;
  PulseSchedule schedule;
};

struct WorkerOutput {
  Trajectory trajectory;
  std::vector<EpisodeSummary> episodes;
};

// Persistent per-worker rollout state; episodes continue across iterations.
class RolloutWorker {
 public:
  RolloutWorker(env::GateEnv environment, std::uint64_t seed, std::size_t index)
      : env_(std::move(environment)),
        rng_(make_rng(seed, 1000 + index)),
        seed_(seed),
        index_(index) {}

  WorkerOutput collect(const PolicyParameters& policy, const nn::MlpParameters& value,
                       int horizon) {
    WorkerOutput out;
    out.trajectory.steps.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      if (need_reset_) {
        obs_ = env_.reset(derive_seed(seed_, (index_ << 32) + episodes_)).features;
        episode_return_ = 0.0;
        need_reset_ = false;
      }
      const ActionDistribution dist = policy_distribution(policy, obs_);
      Transition tr;
      tr.observation = obs_;
      for (std::size_t k = 0; k < kActDim; ++k) {
        tr.action[k] = dist.mean[k] + std::exp(dist.log_std[k]) * standard_normal(rng_);
      }
      tr.log_prob = nn::gaussian_logprob(dist.mean, dist.log_std, tr.action).logp;
      tr.value = nn::predict(value, obs_)(0);

      const env::StepResult res = env_.step_continuous(tr.action);
      tr.reward = res.reward;
      tr.terminated = res.terminated;
      tr.truncated = res.truncated;
      episode_return_ += res.reward;
      if (res.truncated) tr.truncation_value = nn::predict(value, res.observation.features)(0);
      out.trajectory.steps.push_back(std::move(tr));

      if (res.done()) {
        out.episodes.push_back(
            {episode_return_, res.info.fidelity, res.info.gate_duration_ns, env_.export_schedule()});
        ++episodes_;
        need_reset_ = true;
      } else {
        obs_ = res.observation.features;
      }
    }
    const Transition& last = out.trajectory.steps.back();
    if (last.truncated) {
      out.trajectory.bootstrap_value = last.truncation_value;
    } else if (!last.terminated) {
      out.trajectory.bootstrap_value = nn::predict(value, obs_)(0);
    }
    return out;
  }

 private:
  env::GateEnv env_;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
  std::size_t index_;
  std::vector<double> obs_;
  std::uint64_t episodes_ = 0;
  double episode_return_ = 0.0;
  bool need_reset_ = true;
};

template <typename Fn>
void run_workers(std::size_t n, bool parallel, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t w) {
    try {
      fn(w);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (parallel && n > 1) {
    std::vector<std::jthread> threads;
    threads.reserve(n);
    for (std::size_t w = 0; w < n; ++w) threads.emplace_back(guarded, w);
  } else {
    for (std::size_t w = 0; w < n; ++w) guarded(w);
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (!errors[w]) continue;
    try {
      std::rethrow_exception(errors[w]);
    } catch (const std::exception& e) {
      throw std::runtime_error("rollout worker " + std::to_string(w) +
                               " failed; iteration aborted: " + e.what());
    }
  }
}

}  // namespace

void PpoConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ContractViolation(std::string("PpoConfig.") + what);
  };
  check(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
  check(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
  check(clip_eps > 0.0, "clip_eps must be positive");
  check(lr > 0.0, "lr must be positive");
  check(horizon >= 1, "horizon must be >= 1");
  check(n_envs >= 1, "n_envs must be >= 1");
  check(epochs_per_iter >= 1, "epochs_per_iter must be >= 1");
  check(minibatch >= 1, "minibatch must be >= 1");
  check(value_coef >= 0.0, "value_coef must be non-negative");
  check(entropy_coef >= 0.0, "entropy_coef must be non-negative");
  check(iterations_max >= 1, "iterations_max must be >= 1");
  check(std::isfinite(log_std_init), "log_std_init must be finite");
  check(stop_at_duration_ns >= 0.0, "stop_at_duration_ns must be non-negative");
}

AdvantageEstimate gae(const Trajectory& traj, double gamma, double lambda) {
  const std::size_t n = traj.steps.size();
  if (n == 0) throw ContractViolation("gae: empty trajectory");
  const Transition& last = traj.steps.back();
  if (!last.terminated && !traj.bootstrap_value) {
    throw ContractViolation("gae: trajectory ends in a non-terminal state without a bootstrap value");
  }
  AdvantageEstimate out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double carry = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const Transition& s = traj.steps[i];
    double next_value = 0.0;
    bool boundary = true;
    if (s.terminated) {
      next_value = 0.0;
    } else if (i + 1 == n) {
      next_value = *traj.bootstrap_value;
    } else if (s.truncated) {
      next_value = s.truncation_value;
    } else {
      next_value = traj.steps[i + 1].value;
      boundary = false;
    }
    const double delta = s.reward + gamma * next_value - s.value;
    carry = delta + (boundary ? 0.0 : gamma * lambda * carry);
    out.advantages[i] = carry;
    out.returns[i] = carry + s.value;
  }
  return out;
}

void normalize(std::vector<double>& values) {
  if (values.empty()) return;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  const double scale = sd > 1e-12 ? 1.0 / sd : 1.0;
  for (double& v : values) v = (v - mean) * scale;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

ActionDistribution policy_distribution(const PolicyParameters& policy,
                                       std::span<const double> observation) {
  const nn::Vector out = nn::predict(policy.network, observation);
  ActionDistribution d;
  for (std::size_t k = 0; k < kActDim; ++k) {
    d.mean[k] = out(static_cast<Eigen::Index>(k));
    d.log_std[k] = policy.state_dependent_std ? out(static_cast<Eigen::Index>(kActDim + k))
                                              : policy.log_std[k];
  }
  return d;
}

PpoLoss ppo_loss(const PpoBatch& batch, const PolicyParameters& policy,
                 const nn::MlpParameters& value, const PpoConfig& cfg) {
  const std::size_t n = batch.size();
  if (n == 0 || batch.advantages.size() != n || batch.returns.size() != n ||
      static_cast<std::size_t>(batch.observations.cols()) != n ||
      static_cast<std::size_t>(batch.actions.cols()) != n ||
      batch.actions.rows() != static_cast<Eigen::Index>(kActDim)) {
    throw ContractViolation("ppo_loss: batch fields are not aligned");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  PpoLoss loss;
  loss.log_std_grad.assign(kActDim, 0.0);

  const nn::ForwardResult pf = nn::forward(policy.network, batch.observations);
  nn::Matrix d_policy_out = nn::Matrix::Zero(pf.output.rows(), pf.output.cols());
  const double entropy_const = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

  for (std::size_t b = 0; b < n; ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    std::array<double, kActDim> mean{}, log_std{}, action{};
    for (std::size_t k = 0; k < kActDim; ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      mean[k] = pf.output(row, col);
      log_std[k] = policy.state_dependent_std ? pf.output(row + static_cast<Eigen::Index>(kActDim), col)
                                              : policy.log_std[k];
      action[k] = batch.actions(row, col);
    }
    const nn::GaussianLogProb lp = nn::gaussian_logprob(mean, log_std, action);
    const double log_ratio = lp.logp - batch.old_log_probs[b];
    const double ratio = std::exp(log_ratio);
    if (!std::isfinite(ratio)) {
      std::ostringstream msg;
      msg << "ppo_loss: non-finite probability ratio at sample " << b << " (logp_new " << lp.logp
          << ", logp_old " << batch.old_log_probs[b] << ")";
      throw NumericalError(msg.str());
    }
    const double adv = batch.advantages[b];
    const double unclipped = ratio * adv;
    const double objective = clipped_surrogate(ratio, adv, cfg.clip_eps);
    loss.policy_loss -= objective * inv_n;
    loss.approx_kl -= log_ratio * inv_n;
    if (std::abs(ratio - 1.0) > cfg.clip_eps) loss.clip_fraction += inv_n;

    // d(-objective)/dlogp; zero where the clipped branch is active.
    const double d_logp = unclipped <= objective ? -unclipped * inv_n : 0.0;
    for (std::size_t k = 0; k < kActDim; ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      d_policy_out(row, col) = d_logp * lp.d_mean[k];
      const double d_ls = d_logp * lp.d_log_std[k];
      if (policy.state_dependent_std) {
        d_policy_out(row + static_cast<Eigen::Index>(kActDim), col) =
            d_ls - cfg.entropy_coef * inv_n;
        loss.entropy += (log_std[k] + entropy_const) * inv_n;
      } else {
        loss.log_std_grad[k] += d_ls;
      }
    }
  }
  if (!policy.state_dependent_std) {
    loss.entropy = nn::gaussian_entropy(policy.log_std);
    for (double& g : loss.log_std_grad) g -= cfg.entropy_coef;
  }
  loss.policy_grad = nn::backward(policy.network, pf.cache, d_policy_out);

  const nn::ForwardResult vf = nn::forward(value, batch.observations);
  nn::Matrix d_value_out(1, static_cast<Eigen::Index>(n));
  for (std::size_t b = 0; b < n; ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    const double diff = vf.output(0, col) - batch.returns[b];
    loss.value_loss += cfg.value_coef * diff * diff * inv_n;
    d_value_out(0, col) = cfg.value_coef * 2.0 * diff * inv_n;
  }
  loss.value_grad = nn::backward(value, vf.cache, d_value_out);
  loss.total = loss.policy_loss + loss.value_loss - cfg.entropy_coef * loss.entropy;
  return loss;
}

PpoResult train_ppo(const EnvFactory& make_env, const PpoConfig& cfg, std::uint64_t seed,
                    const IterationCallback& on_iteration) {
  cfg.validate();
  const auto n_workers = static_cast<std::size_t>(cfg.n_envs);
  std::vector<RolloutWorker> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(make_env(), seed, w);

  const env::GateEnv probe = make_env();
  const env::EnvConfig& ecfg = probe.config();
  const int in_dim = static_cast<int>(ecfg.observation_size());
  const int policy_out = static_cast<int>(cfg.state_dependent_std ? 2 * kActDim : kActDim);

  PpoResult result;
  result.best = BestGateTracker(ecfg.f_bonus);
  result.policy.network = nn::init_mlp(in_dim, policy_out, derive_seed(seed, 1));
  result.policy.state_dependent_std = cfg.state_dependent_std;
  result.policy.log_std.assign(kActDim, cfg.log_std_init);
  if (cfg.state_dependent_std) {
    result.policy.network.bias(2).tail(static_cast<Eigen::Index>(kActDim)).setConstant(cfg.log_std_init);
  }
  result.value = nn::init_mlp(in_dim, 1, derive_seed(seed, 2));

  const nn::AdamConfig adam_cfg{cfg.lr, 0.9, 0.999, 1e-8, 0.0};
  nn::AdamState policy_adam(result.policy.network.size());
  nn::AdamState log_std_adam(kActDim);
  nn::AdamState value_adam(result.value.size());
  std::mt19937_64 shuffle_rng = make_rng(seed, 3);

  for (int iter = 0; iter < cfg.iterations_max; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    const PolicyParameters policy_snapshot = result.policy;
    const nn::MlpParameters value_snapshot = result.value;

    std::vector<WorkerOutput> outputs(n_workers);
    run_workers(n_workers, cfg.parallel, [&](std::size_t w) {
      outputs[w] = workers[w].collect(policy_snapshot, value_snapshot, cfg.horizon);
    });

    IterationStats stats;
    stats.iteration = iter;
    double return_sum = 0.0;
    double fidelity_sum = 0.0;
    for (const WorkerOutput& out : outputs) {
      for (const EpisodeSummary& ep : out.episodes) {
        ++stats.episodes;
        return_sum += ep.episode_return;
        fidelity_sum += ep.fidelity;
        stats.iteration_best_fidelity = std::max(stats.iteration_best_fidelity, ep.fidelity);
        result.best.consider(ep.schedule, ep.fidelity, ep.duration_ns);
      }
    }
    if (stats.episodes > 0) {
      stats.mean_return = return_sum / stats.episodes;
      stats.mean_final_fidelity = fidelity_sum / stats.episodes;
    }

    // Pool samples in worker order.
    std::vector<const Transition*> pooled;
    std::vector<double> advantages;
    std::vector<double> returns;
    for (const WorkerOutput& out : outputs) {
      const AdvantageEstimate est = gae(out.trajectory, cfg.gamma, cfg.lambda);
      for (std::size_t i = 0; i < out.trajectory.steps.size(); ++i) {
        pooled.push_back(&out.trajectory.steps[i]);
        advantages.push_back(est.advantages[i]);
        returns.push_back(est.returns[i]);
      }
    }
    if (cfg.normalize_advantages) normalize(advantages);
    const std::size_t n = pooled.size();
    stats.samples = static_cast<int>(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    int batches = 0;
    for (int epoch = 0; epoch < cfg.epochs_per_iter; ++epoch) {
      for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
      }
      for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.minibatch)) {
        const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.minibatch));
        PpoBatch batch;
        batch.observations.resize(in_dim, static_cast<Eigen::Index>(stop - start));
        batch.actions.resize(static_cast<Eigen::Index>(kActDim), static_cast<Eigen::Index>(stop - start));
        for (std::size_t j = start; j < stop; ++j) {
          const Transition& tr = *pooled[order[j]];
          const auto col = static_cast<Eigen::Index>(j - start);
          batch.observations.col(col) =
              Eigen::Map<const nn::Vector>(tr.observation.data(), in_dim);
          for (std::size_t k = 0; k < kActDim; ++k) {
            batch.actions(static_cast<Eigen::Index>(k), col) = tr.action[k];
          }
          batch.old_log_probs.push_back(tr.log_prob);
          batch.advantages.push_back(advantages[order[j]]);
          batch.returns.push_back(returns[order[j]]);
        }
        const PpoLoss loss = ppo_loss(batch, result.policy, result.value, cfg);
        nn::adam_step(result.policy.network, loss.policy_grad, policy_adam, adam_cfg);
        if (!cfg.state_dependent_std) {
          nn::adam_step(result.policy.log_std, loss.log_std_grad, log_std_adam, adam_cfg);
        }
        nn::adam_step(result.value, loss.value_grad, value_adam, adam_cfg);
        stats.policy_loss += loss.policy_loss;
        stats.value_loss += loss.value_loss;
        stats.entropy += loss.entropy;
        stats.approx_kl += loss.approx_kl;
        stats.clip_fraction += loss.clip_fraction;
        ++batches;
      }
    }
    if (batches > 0) {
      stats.policy_loss /= batches;
      stats.value_loss /= batches;
      stats.entropy /= batches;
      stats.approx_kl /= batches;
      stats.clip_fraction /= batches;
    }
    stats.mean_log_std = std::accumulate(result.policy.log_std.begin(), result.policy.log_std.end(), 0.0) /
                         static_cast<double>(kActDim);
    stats.best_fidelity = result.best.best_fidelity();
    stats.best_duration_ns = result.best.best_duration_ns();
    stats.shortest_success_ns =
        std::isfinite(result.best.shortest_success_ns()) ? result.best.shortest_success_ns() : 0.0;
    stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.iterations.push_back(stats);
    if (on_iteration) on_iteration(stats);

    if (cfg.stop_at_duration_ns > 0.0 &&
        result.best.shortest_success_ns() <= cfg.stop_at_duration_ns) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace qdsim::rl
