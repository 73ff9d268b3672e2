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

#include <filesystem>
#include <span>
#include <vector>

namespace qdsim::cli {

inline constexpr int kFidelityWindow = 10;

// Means over every full window of `window` consecutive values; the result has
// max(0, n - window + 1) entries.
std::vector<double> trailing_means(std::span<const double> values, int window);

// Re-derives the plot-data TSV files of a finished run from its stored
// config, metrics and best schedule:
//   fidelity_vs_episode.tsv  trailing-10 mean final fidelity per episode
//                            (per iteration for PPO)
//   tunnel_vs_time.tsv, detuning_vs_time.tsv, bias0_vs_time.tsv,
//   bias1_vs_time.tsv        best schedule controls over time
// Throws ConfigError if a required artifact is missing.
void export_plots(const std::filesystem::path& run_dir);

}  // namespace qdsim::cli
