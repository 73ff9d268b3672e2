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

#include <span>
#include <vector>

namespace qdsim::nn {

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // dL/dpred
};

// mean((pred - target)^2) and its gradient 2 (pred - target) / n.
LossGrad mse_loss(std::span<const double> pred, std::span<const double> target);

struct GaussianLogProb {
  double logp = 0.0;
  std::vector<double> d_mean;
  std::vector<double> d_log_std;
};

// Log-density of `sample` under a diagonal Gaussian N(mean, exp(log_std)^2).
GaussianLogProb gaussian_logprob(std::span<const double> mean, std::span<const double> log_std,
                                 std::span<const double> sample);

// Differential entropy of the same Gaussian; d/dlog_std is 1 per dimension.
double gaussian_entropy(std::span<const double> log_std);

}  // namespace qdsim::nn
