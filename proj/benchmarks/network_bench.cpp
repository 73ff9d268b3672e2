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

#include <benchmark/benchmark.h>

#include <random>

#include "qdsim/adam.hpp"
#include "qdsim/mlp.hpp"
#include "qdsim/ppo.hpp"

namespace {

using namespace qdsim;

nn::Matrix random_batch(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  nn::Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = d(rng);
  }
  return m;
}

void BM_Forward(benchmark::State& state) {
  const nn::MlpParameters p = nn::init_mlp(33, 27, 1);
  const nn::Matrix x = random_batch(33, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(p, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(64);

void BM_ForwardBackward(benchmark::State& state) {
  const nn::MlpParameters p = nn::init_mlp(33, 27, 1);
  const int batch = static_cast<int>(state.range(0));
  const nn::Matrix x = random_batch(33, batch, 2);
  const nn::Matrix dy = random_batch(27, batch, 3);
  for (auto _ : state) {
    const nn::ForwardResult f = nn::forward(p, x);
    benchmark::DoNotOptimize(nn::backward(p, f.cache, dy));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardBackward)->Arg(1)->Arg(64);

void BM_AdamStep(benchmark::State& state) {
  nn::MlpParameters p = nn::init_mlp(33, 27, 1);
  nn::GradientSet g{nn::init_mlp(33, 27, 2), {}};
  nn::AdamState s(p.size());
  nn::AdamConfig cfg;
  cfg.lr = 1e-6;
  for (auto _ : state) nn::adam_step(p, g, s, cfg);
}
BENCHMARK(BM_AdamStep);

void BM_PpoLossMinibatch(benchmark::State& state) {
  constexpr int kBatch = 64;
  rl::PolicyParameters policy{nn::init_mlp(33, 3, 1), {-0.69, -0.69, -0.69}, false};
  const nn::MlpParameters value = nn::init_mlp(33, 1, 2);
  rl::PpoBatch batch;
  batch.observations = random_batch(33, kBatch, 3);
  batch.actions = random_batch(3, kBatch, 4);
  batch.old_log_probs.assign(kBatch, -2.0);
  batch.advantages.assign(kBatch, 0.5);
  batch.returns.assign(kBatch, 1.0);
  const rl::PpoConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rl::ppo_loss(batch, policy, value, cfg));
}
BENCHMARK(BM_PpoLossMinibatch);

}  // namespace
