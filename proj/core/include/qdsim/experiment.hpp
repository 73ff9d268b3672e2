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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qdsim/environment.hpp"
#include "qdsim/ppo.hpp"
#include "qdsim/td.hpp"

namespace qdsim::cli {

enum class Algorithm { kQLearning, kSarsa, kPpo };

std::string_view to_string(Algorithm algo);

// Environment variable that replaces `output_dir` from the config file.
inline constexpr const char* kOutputDirEnv = "QDSIM_OUTPUT_DIR";

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kPpo;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "runs";
  env::EnvConfig env;  // physics constants (u, ez) live here too
  rl::TdConfig td;
  rl::PpoConfig ppo;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// JSON config. Missing keys take the defaults above; unknown keys, type
// mismatches and out-of-range values are rejected with the field path.
// Syntax errors report the 1-based line and column.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

// Canonical JSON with every field spelled out; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);
std::string config_digest(const ExperimentConfig& cfg);

struct RunSummary {
  double best_fidelity = 0.0;
  double best_duration_ns = 0.0;
  std::optional<double> shortest_success_ns;
  int records = 0;  // episodes (TD) or iterations (PPO)
  bool reached_target = false;
};

struct RunManifest {
  std::string config_digest;
  std::string toolkit_version;
  std::string started_at;
  std::string finished_at;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kPpo;
  RunSummary summary;
};

std::string toolkit_version();

// Files written into the run directory.
namespace files {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kMetrics = "metrics.jsonl";
inline constexpr const char* kTiming = "timing.jsonl";
inline constexpr const char* kBestSchedule = "best_schedule.csv";
inline constexpr const char* kCheckpoint = "checkpoint.txt";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace files

// Runs the configured algorithm and writes config, metrics, timing, best
// schedule, checkpoint, plot data and manifest into `run_dir` (created if
// needed). Validation happens before anything touches the filesystem.
RunManifest run_train(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

// True if the stored config.json still hashes to the manifest digest.
bool verify_manifest(const std::filesystem::path& run_dir);

}  // namespace qdsim::cli
