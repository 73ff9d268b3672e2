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

#include "qdsim/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qdsim/errors.hpp"
#include "qdsim/replay.hpp"
#include "qdsim/schedule.hpp"

namespace qdsim::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
  return n;
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("qdsim_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(ParseConfig, MinimalConfigTakesDefaults) {
  const ExperimentConfig c = parse_config_text(R"({"algorithm": "ppo", "seed": 1})");
  EXPECT_EQ(c.algorithm, Algorithm::kPpo);
  EXPECT_EQ(c.seed, 1U);
  EXPECT_EQ(c.ppo.gamma, 0.9);
  EXPECT_EQ(c.ppo.clip_eps, 0.2);
  EXPECT_EQ(c.env.u[0], 845.2);
  EXPECT_EQ(c.env.u[1], 845.2);
  EXPECT_EQ(c.env.ez[0], 18.4);
  EXPECT_EQ(c.env.max_steps, 200);
}

TEST(ParseConfig, ReadsNestedSections) {
  const ExperimentConfig c = parse_config_text(R"({
    "algorithm": "sarsa", "seed": 9, "output_dir": "out/x",
    "physics": {"u_ghz": [800, 810], "ez_ghz": [18, 19]},
    "env": {"max_steps": 50, "eps_bounds_ghz": [-500, 500], "obs_mode": "full16"},
    "td": {"episodes_max": 12, "alpha": 0.5, "lr": 0.002, "lr_decay": 0}
  })");
  EXPECT_EQ(c.algorithm, Algorithm::kSarsa);
  EXPECT_EQ(c.output_dir, fs::path("out/x"));
  EXPECT_EQ(c.env.u[1], 810.0);
  EXPECT_EQ(c.env.max_steps, 50);
  EXPECT_EQ(c.env.bounds.eps_min, -500.0);
  EXPECT_EQ(c.env.obs_mode, env::ObsMode::kFull16);
  EXPECT_EQ(c.td.episodes_max, 12);
  EXPECT_EQ(c.td.alpha, 0.5);
  EXPECT_EQ(c.td.adam.lr, 0.002);
  EXPECT_EQ(c.td.adam.lr_decay, 0.0);
}

TEST(ParseConfig, EmptyOrMissingAlgorithmNamesField) {
  EXPECT_EQ(error_of(R"({"algorithm": "", "seed": 1})").rfind("algorithm", 0), 0U);
  EXPECT_EQ(error_of(R"({"seed": 1})").rfind("algorithm", 0), 0U);
  EXPECT_NE(error_of(R"({"algorithm": "dqn"})").find("dqn"), std::string::npos);
}

TEST(ParseConfig, RejectsUnknownKeysAndTypeMismatches) {
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "sede": 1})").find("sede"), std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "ppo": {"clip": 0.1}})").find("ppo.clip"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "ppo": {"horizon": "long"}})").find("ppo.horizon"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "ppo": {"horizon": 2.5}})").find("ppo.horizon"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "seed": -3})").find("seed"), std::string::npos);
}

TEST(ParseConfig, RejectsSectionForOtherAlgorithm) {
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "td": {}})").find("td"), std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "qlearning", "ppo": {}})").find("ppo"), std::string::npos);
}

TEST(ParseConfig, ReportsSyntaxErrorLocation) {
  const std::string msg = error_of("{\n  \"algorithm\": \"ppo\",\n  \"seed\": ,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ParseConfig, ValidationErrorsNameField) {
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "ppo": {"clip_eps": 0}})").find("clip_eps"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "sarsa", "td": {"gamma": 1.5}})").find("gamma"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"algorithm": "ppo", "env": {"tun_init_ghz": 7}})").find("tun_init"),
            std::string::npos);
}

TEST(ParseConfig, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/qdsim.json"), ConfigError);
}

TEST(SerializeConfig, RoundTripPreservesDigest) {
  for (const char* text :
       {R"({"algorithm": "ppo", "seed": 1})",
        R"({"algorithm": "qlearning", "seed": 3, "td": {"alpha": 0.3, "replay_capacity": 10}})",
        R"({"algorithm": "sarsa", "env": {"f_terminal": 0.999, "step_sizes_ghz": [2, 0.2, 0.02]}})"}) {
    const ExperimentConfig c = parse_config_text(text);
    const std::string s = serialize_config(c);
    const ExperimentConfig back = parse_config_text(s);
    EXPECT_EQ(serialize_config(back), s);
    EXPECT_EQ(config_digest(back), config_digest(c));
  }
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

ExperimentConfig smoke_config(Algorithm algo) {
  ExperimentConfig c;
  c.algorithm = algo;
  c.seed = 5;
  c.td.episodes_max = 5;
  c.td.stop_at_target = false;
  c.ppo.n_envs = 2;
  c.ppo.horizon = 20;
  c.ppo.iterations_max = 3;
  c.ppo.epochs_per_iter = 1;
  c.ppo.minibatch = 20;
  return c;
}

TEST(RunTrain, SmokeRunWritesArtifacts) {
  TempDir dir;
  const RunManifest m = run_train(smoke_config(Algorithm::kQLearning), dir.path());
  EXPECT_EQ(count_lines(dir.path() / files::kMetrics), 5);
  EXPECT_EQ(count_lines(dir.path() / files::kTiming), 5);
  for (const char* f : {files::kConfig, files::kBestSchedule, files::kCheckpoint, files::kManifest}) {
    EXPECT_TRUE(fs::exists(dir.path() / f)) << f;
  }
  EXPECT_TRUE(fs::exists(dir.path() / "fidelity_vs_episode.tsv"));
  EXPECT_EQ(m.summary.records, 5);
  EXPECT_EQ(m.config_digest, sha256_hex(slurp(dir.path() / files::kConfig)));

  const RunManifest back = read_manifest(dir.path() / files::kManifest);
  EXPECT_EQ(back.config_digest, m.config_digest);
  EXPECT_EQ(back.seed, 5U);
  EXPECT_EQ(back.algorithm, Algorithm::kQLearning);
  EXPECT_EQ(back.summary.best_fidelity, m.summary.best_fidelity);
  EXPECT_EQ(back.toolkit_version, toolkit_version());
}

TEST(RunTrain, RepeatedRunsGiveIdenticalMetrics) {
  for (Algorithm algo : {Algorithm::kSarsa, Algorithm::kPpo}) {
    TempDir a;
    const fs::path first = a.path() / "first", second = a.path() / "second";
    run_train(smoke_config(algo), first);
    run_train(smoke_config(algo), second);
    EXPECT_EQ(slurp(first / files::kMetrics), slurp(second / files::kMetrics));
    EXPECT_EQ(slurp(first / files::kBestSchedule), slurp(second / files::kBestSchedule));
    EXPECT_EQ(slurp(first / files::kCheckpoint), slurp(second / files::kCheckpoint));
    EXPECT_FALSE(slurp(first / files::kMetrics).empty());
  }
}

TEST(RunTrain, ManifestDetectsAnyConfigChange) {
  TempDir dir;
  run_train(smoke_config(Algorithm::kQLearning), dir.path());
  EXPECT_TRUE(verify_manifest(dir.path()));
  const fs::path cfg = dir.path() / files::kConfig;
  const std::string original = slurp(cfg);
  for (std::size_t pos : {std::size_t{0}, original.size() / 2, original.size() - 1}) {
    std::string mutated = original;
    mutated[pos] = mutated[pos] == ' ' ? '\t' : ' ';
    std::ofstream(cfg, std::ios::binary) << mutated;
    EXPECT_FALSE(verify_manifest(dir.path())) << pos;
  }
  std::ofstream(cfg, std::ios::binary) << original;
  EXPECT_TRUE(verify_manifest(dir.path()));
}

TEST(RunTrain, InvalidConfigLeavesNoDirectory) {
  TempDir dir;
  ExperimentConfig c = smoke_config(Algorithm::kPpo);
  c.ppo.n_envs = 0;
  EXPECT_THROW(run_train(c, dir.path() / "run"), ConfigError);
  EXPECT_FALSE(fs::exists(dir.path() / "run"));
}

TEST(RunTrain, BestScheduleReplaysToLoggedFidelity) {
  TempDir dir;
  const RunManifest m = run_train(smoke_config(Algorithm::kPpo), dir.path());
  const PulseSchedule best = read_schedule_csv(dir.path() / files::kBestSchedule);
  EXPECT_EQ(static_cast<double>(best.size()), m.summary.best_duration_ns);
  const ExperimentConfig stored = parse_config(dir.path() / files::kConfig);
  EXPECT_NEAR(run_replay(best, stored.env).final.fidelity, m.summary.best_fidelity, 1e-9);
}

}  // namespace
}  // namespace qdsim::cli
