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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdsim::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // batches: one sample per column

inline constexpr int kHiddenWidth = 64;
inline constexpr std::size_t kNumLayers = 3;

// Weights and biases of an in -> 64 -> 64 -> out perceptron with tanh hidden
// units and a linear output. All values live in one flat buffer laid out as
// W1, b1, W2, b2, W3, b3 with each W stored row-major (out x in), which is
// also the checkpoint order.
class MlpParameters {
 public:
  MlpParameters() = default;
  MlpParameters(int in_dim, int out_dim, int hidden = kHiddenWidth);

  int in_dim() const { return sizes_[0]; }
  int out_dim() const { return sizes_[kNumLayers]; }
  const std::array<int, kNumLayers + 1>& sizes() const { return sizes_; }

  Eigen::Map<RowMatrix> weight(std::size_t layer);
  Eigen::Map<const RowMatrix> weight(std::size_t layer) const;
  Eigen::Map<Vector> bias(std::size_t layer);
  Eigen::Map<const Vector> bias(std::size_t layer) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  bool same_shape(const MlpParameters& other) const { return sizes_ == other.sizes_; }
  bool all_finite() const;
  void set_zero();

 private:
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;

  std::array<int, kNumLayers + 1> sizes_{};
  std::vector<double> values_;
};

// Glorot-uniform weights, zero biases, deterministic in `seed`.
MlpParameters init_mlp(int in_dim, int out_dim, std::uint64_t seed, int hidden = kHiddenWidth);

struct ForwardCache {
  Matrix input;     // in x B
  Matrix hidden1;   // tanh activations, 64 x B
  Matrix hidden2;   // 64 x B
};

struct ForwardResult {
  Matrix output;  // out x B
  ForwardCache cache;
};

// Batched forward pass. Throws ContractViolation on a shape mismatch or a
// non-finite input.
ForwardResult forward(const MlpParameters& p, const Matrix& inputs);
Vector predict(const MlpParameters& p, std::span<const double> x);

struct GradientSet {
  MlpParameters params;  // dL/dtheta, same layout as the network
  Matrix input;          // dL/dx, in x B
};

// Exact reverse-mode gradients; parameter gradients are summed over the batch.
GradientSet backward(const MlpParameters& p, const ForwardCache& cache, const Matrix& d_output);

}  // namespace qdsim::nn
