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

#include "qdsim/metrics.hpp"

#include <nlohmann/json.hpp>

namespace qdsim::cli {

using Json = nlohmann::ordered_json;

std::string episode_record(std::uint64_t seed, std::string_view algorithm,
                           const rl::EpisodeStats& s) {
  Json j;
  j["seed"] = seed;
  j["algorithm"] = algorithm;
  j["index"] = s.episode;
  j["return"] = s.episode_return;
  j["final_fidelity"] = s.final_fidelity;
  j["best_fidelity"] = s.best_fidelity;
  j["gate_duration_ns"] = s.gate_duration_ns;
  j["steps"] = s.steps;
  j["terminated"] = s.terminated;
  j["epsilon"] = s.epsilon;
  j["loss"] = s.mean_loss;
  j["trailing_mean_fidelity"] = s.trailing_mean_fidelity;
  return j.dump();
}

std::string iteration_record(std::uint64_t seed, const rl::IterationStats& s) {
  Json j;
  j["seed"] = seed;
  j["algorithm"] = "ppo";
  j["index"] = s.iteration;
  j["return"] = s.mean_return;
  j["episodes"] = s.episodes;
  j["samples"] = s.samples;
  j["mean_final_fidelity"] = s.mean_final_fidelity;
  j["iteration_best_fidelity"] = s.iteration_best_fidelity;
  j["best_fidelity"] = s.best_fidelity;
  j["gate_duration_ns"] = s.best_duration_ns;
  j["shortest_success_ns"] = s.shortest_success_ns;
  j["policy_loss"] = s.policy_loss;
  j["value_loss"] = s.value_loss;
  j["entropy"] = s.entropy;
  j["approx_kl"] = s.approx_kl;
  j["clip_fraction"] = s.clip_fraction;
  j["mean_log_std"] = s.mean_log_std;
  return j.dump();
}

std::string timing_record(int index, double wall_ms) {
  Json j;
  j["index"] = index;
  j["wall_ms"] = wall_ms;
  return j.dump();
}

}  // namespace qdsim::cli
