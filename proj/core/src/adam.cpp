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

#include "qdsim/adam.hpp"

#include <cmath>
#include <string>

#include "qdsim/errors.hpp"

namespace qdsim::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ContractViolation("adam_step: parameter (" + std::to_string(params.size()) +
                            "), gradient (" + std::to_string(grads.size()) + ") and moment (" +
                            std::to_string(state.m.size()) + ") sizes differ");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericalError("adam_step: non-finite gradient at flat index " + std::to_string(i) +
                           " (value " + std::to_string(grads[i]) + ", update " +
                           std::to_string(state.t) + ")");
    }
  }
  const double lr = cfg.lr / (1.0 + cfg.lr_decay * static_cast<double>(state.t));
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

void adam_step(MlpParameters& params, const GradientSet& grads, AdamState& state,
               const AdamConfig& cfg) {
  if (!params.same_shape(grads.params)) {
    throw ContractViolation("adam_step: gradient shape does not match the network");
  }
  adam_step(params.values(), grads.params.values(), state, cfg);
}

}  // namespace qdsim::nn
