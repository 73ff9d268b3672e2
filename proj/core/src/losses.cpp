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

#include "qdsim/losses.hpp"

#include <cmath>
#include <numbers>

#include "qdsim/errors.hpp"

namespace qdsim::nn {

LossGrad mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw ContractViolation("mse_loss: prediction and target lengths differ or are empty");
  }
  const double n = static_cast<double>(pred.size());
  LossGrad out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    out.loss += diff * diff;
    out.grad[i] = 2.0 * diff / n;
  }
  out.loss /= n;
  return out;
}

GaussianLogProb gaussian_logprob(std::span<const double> mean, std::span<const double> log_std,
                                 std::span<const double> sample) {
  if (mean.size() != log_std.size() || mean.size() != sample.size()) {
    throw ContractViolation("gaussian_logprob: mean, log_std and sample lengths differ");
  }
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  GaussianLogProb out;
  out.d_mean.resize(mean.size());
  out.d_log_std.resize(mean.size());
  for (std::size_t k = 0; k < mean.size(); ++k) {
    const double inv_var = std::exp(-2.0 * log_std[k]);
    const double diff = sample[k] - mean[k];
    const double z2 = diff * diff * inv_var;
    out.logp += -0.5 * z2 - log_std[k] - half_log_two_pi;
    out.d_mean[k] = diff * inv_var;
    out.d_log_std[k] = z2 - 1.0;
  }
  return out;
}

double gaussian_entropy(std::span<const double> log_std) {
  const double per_dim = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  double h = 0.0;
  for (double ls : log_std) h += ls + per_dim;
  return h;
}

}  // namespace qdsim::nn
