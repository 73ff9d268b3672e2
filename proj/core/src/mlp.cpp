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

#include "qdsim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qdsim/errors.hpp"

namespace qdsim::nn {

MlpParameters::MlpParameters(int in_dim, int out_dim, int hidden)
    : sizes_{in_dim, hidden, hidden, out_dim} {
  if (in_dim < 1 || out_dim < 1 || hidden < 1) {
    throw ContractViolation("MlpParameters: layer sizes must be >= 1");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    total += static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l] + 1);
  }
  values_.assign(total, 0.0);
}

std::size_t MlpParameters::weight_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l) {
    off += static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l] + 1);
  }
  return off;
}

std::size_t MlpParameters::bias_offset(std::size_t layer) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(sizes_[layer + 1]) * static_cast<std::size_t>(sizes_[layer]);
}

Eigen::Map<RowMatrix> MlpParameters::weight(std::size_t layer) {
  return {values_.data() + weight_offset(layer), sizes_[layer + 1], sizes_[layer]};
}
Eigen::Map<const RowMatrix> MlpParameters::weight(std::size_t layer) const {
  return {values_.data() + weight_offset(layer), sizes_[layer + 1], sizes_[layer]};
}
Eigen::Map<Vector> MlpParameters::bias(std::size_t layer) {
  return {values_.data() + bias_offset(layer), sizes_[layer + 1]};
}
Eigen::Map<const Vector> MlpParameters::bias(std::size_t layer) const {
  return {values_.data() + bias_offset(layer), sizes_[layer + 1]};
}

bool MlpParameters::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void MlpParameters::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

MlpParameters init_mlp(int in_dim, int out_dim, std::uint64_t seed, int hidden) {
  MlpParameters p(in_dim, out_dim, hidden);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto w = p.weight(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
  }
  return p;
}

ForwardResult forward(const MlpParameters& p, const Matrix& inputs) {
  if (inputs.rows() != p.in_dim()) {
    throw ContractViolation("forward: input has " + std::to_string(inputs.rows()) +
                            " rows, network expects " + std::to_string(p.in_dim()));
  }
  if (!inputs.allFinite()) {
    throw ContractViolation("forward: non-finite input");
  }
  ForwardResult r;
  r.cache.input = inputs;
  r.cache.hidden1 = ((p.weight(0) * inputs).colwise() + p.bias(0)).array().tanh().matrix();
  r.cache.hidden2 = ((p.weight(1) * r.cache.hidden1).colwise() + p.bias(1)).array().tanh().matrix();
  r.output = (p.weight(2) * r.cache.hidden2).colwise() + p.bias(2);
  return r;
}

Vector predict(const MlpParameters& p, std::span<const double> x) {
  const Eigen::Map<const Vector> in(x.data(), static_cast<Eigen::Index>(x.size()));
  return forward(p, Matrix(in)).output.col(0);
}

GradientSet backward(const MlpParameters& p, const ForwardCache& cache, const Matrix& d_output) {
  if (d_output.rows() != p.out_dim() || d_output.cols() != cache.input.cols() ||
      cache.input.rows() != p.in_dim()) {
    throw ContractViolation("backward: gradient/cache shape does not match the network");
  }
  GradientSet g{MlpParameters(p.in_dim(), p.out_dim(), p.sizes()[1]), Matrix()};

  g.params.weight(2).noalias() = d_output * cache.hidden2.transpose();
  g.params.bias(2) = d_output.rowwise().sum();

  const Matrix d_pre2 =
      ((p.weight(2).transpose() * d_output).array() * (1.0 - cache.hidden2.array().square()))
          .matrix();
  g.params.weight(1).noalias() = d_pre2 * cache.hidden1.transpose();
  g.params.bias(1) = d_pre2.rowwise().sum();

  const Matrix d_pre1 =
      ((p.weight(1).transpose() * d_pre2).array() * (1.0 - cache.hidden1.array().square()))
          .matrix();
  g.params.weight(0).noalias() = d_pre1 * cache.input.transpose();
  g.params.bias(0) = d_pre1.rowwise().sum();

  g.input = p.weight(0).transpose() * d_pre1;
  return g;
}

}  // namespace qdsim::nn
