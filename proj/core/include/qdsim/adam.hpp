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
#include <span>
#include <vector>

#include "qdsim/mlp.hpp"

namespace qdsim::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Inverse-time decay: the k-th update (k = 0, 1, ...) uses lr / (1 + lr_decay * k).
  double lr_decay = 0.01;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;  // updates applied so far

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update of `params` in place. Throws NumericalError
// naming the first non-finite gradient entry; parameters are untouched then.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg);

void adam_step(MlpParameters& params, const GradientSet& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace qdsim::nn
