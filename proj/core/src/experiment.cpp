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

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdsim/checkpoint.hpp"
#include "qdsim/errors.hpp"
#include "qdsim/metrics.hpp"
#include "qdsim/plots.hpp"

#ifndef QDSIM_VERSION
#define QDSIM_VERSION "0.0.0"
#endif

namespace qdsim::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string type_name(const Json& j) { return j.type_name(); }

// Reads typed values out of one JSON object, remembering which keys were
// consumed so leftovers can be reported as unknown.
class Section {
 public:
  Section(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw ConfigError(where("") + ": expected an object, got " + type_name(obj_));
    }
  }

  const Json* find(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number, got " + type_name(*v));
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "must be finite");
    }
  }

  void integer(const char* key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer, got " + type_name(*v));
      const auto x = v->get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        fail(key, "integer out of range");
      }
      out = static_cast<int>(x);
    }
  }

  void unsigned_integer(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer, got " + type_name(*v));
      out = v->get<std::uint64_t>();
    }
  }

  void size(const char* key, std::size_t& out) {
    std::uint64_t x = out;
    unsigned_integer(key, x);
    out = static_cast<std::size_t>(x);
  }

  void boolean(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected a boolean, got " + type_name(*v));
      out = v->get<bool>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string, got " + type_name(*v));
      out = v->get<std::string>();
    }
  }

  template <std::size_t N>
  void numbers(const char* key, std::array<double, N>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array() || v->size() != N) {
        fail(key, "expected an array of " + std::to_string(N) + " numbers");
      }
      for (std::size_t i = 0; i < N; ++i) {
        if (!(*v)[i].is_number()) fail(key, "expected an array of numbers");
        out[i] = (*v)[i].get<double>();
      }
    }
  }

  std::optional<Section> child(const char* key) {
    if (const Json* v = find(key)) return Section(*v, where(key));
    return std::nullopt;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ConfigError(where(it.key()) + ": unknown key");
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(where(key) + ": " + msg);
  }

 private:
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Algorithm parse_algorithm(const std::string& s) {
  if (s == "qlearning") return Algorithm::kQLearning;
  if (s == "sarsa") return Algorithm::kSarsa;
  if (s == "ppo") return Algorithm::kPpo;
  if (s.empty()) throw ConfigError("algorithm: must be one of qlearning, sarsa, ppo (got empty)");
  throw ConfigError("algorithm: must be one of qlearning, sarsa, ppo (got '" + s + "')");
}

void read_env(Section& s, env::EnvConfig& e) {
  std::array<double, 2> eps_bounds{e.bounds.eps_min, e.bounds.eps_max};
  std::array<double, 2> tun_bounds{e.bounds.tun_min, e.bounds.tun_max};
  std::string obs = e.obs_mode == env::ObsMode::kComputational4 ? "computational4" : "full16";
  s.numbers("eps_init_ghz", e.eps_init);
  s.number("tun_init_ghz", e.tun_init);
  s.numbers("eps_bounds_ghz", eps_bounds);
  s.numbers("tun_bounds_ghz", tun_bounds);
  s.number("dt_ns", e.dt_ns);
  s.integer("max_steps", e.max_steps);
  s.number("f_terminal", e.f_terminal);
  s.number("f_bonus", e.f_bonus);
  s.number("r_step", e.r_step);
  s.number("r_boundary", e.r_boundary);
  s.number("r_success", e.r_success);
  s.number("r_bonus", e.r_bonus);
  s.string("obs_mode", obs);
  s.numbers("step_sizes_ghz", e.step_sizes);
  s.numbers("step_thresholds", e.step_thresholds);
  s.finish();
  e.bounds = {eps_bounds[0], eps_bounds[1], tun_bounds[0], tun_bounds[1]};
  if (obs == "computational4") {
    e.obs_mode = env::ObsMode::kComputational4;
  } else if (obs == "full16") {
    e.obs_mode = env::ObsMode::kFull16;
  } else {
    s.fail("obs_mode", "must be computational4 or full16");
  }
}

void read_td(Section& s, rl::TdConfig& t) {
  s.number("alpha", t.alpha);
  s.number("gamma", t.gamma);
  s.number("epsilon_init", t.epsilon_init);
  s.number("epsilon_decay", t.epsilon_decay);
  s.number("epsilon_min", t.epsilon_min);
  s.integer("episodes_max", t.episodes_max);
  s.number("target_mean_fidelity", t.target_mean_fidelity);
  s.integer("mean_window", t.mean_window);
  s.boolean("stop_at_target", t.stop_at_target);
  s.number("lr", t.adam.lr);
  s.number("lr_decay", t.adam.lr_decay);
  s.size("replay_capacity", t.replay_capacity);
  s.integer("replay_batch", t.replay_batch);
  s.integer("target_sync_steps", t.target_sync_steps);
  s.finish();
}

void read_ppo(Section& s, rl::PpoConfig& p) {
  s.number("gamma", p.gamma);
  s.number("lambda", p.lambda);
  s.number("clip_eps", p.clip_eps);
  s.number("lr", p.lr);
  s.integer("horizon", p.horizon);
  s.integer("n_envs", p.n_envs);
  s.integer("epochs_per_iter", p.epochs_per_iter);
  s.integer("minibatch", p.minibatch);
  s.number("value_coef", p.value_coef);
  s.number("entropy_coef", p.entropy_coef);
  s.integer("iterations_max", p.iterations_max);
  s.number("log_std_init", p.log_std_init);
  s.boolean("state_dependent_std", p.state_dependent_std);
  s.boolean("normalize_advantages", p.normalize_advantages);
  s.boolean("parallel", p.parallel);
  s.number("stop_at_duration_ns", p.stop_at_duration_ns);
  s.finish();
}

Json env_json(const env::EnvConfig& e) {
  Json j;
  j["eps_init_ghz"] = e.eps_init;
  j["tun_init_ghz"] = e.tun_init;
  j["eps_bounds_ghz"] = std::array<double, 2>{e.bounds.eps_min, e.bounds.eps_max};
  j["tun_bounds_ghz"] = std::array<double, 2>{e.bounds.tun_min, e.bounds.tun_max};
  j["dt_ns"] = e.dt_ns;
  j["max_steps"] = e.max_steps;
  j["f_terminal"] = e.f_terminal;
  j["f_bonus"] = e.f_bonus;
  j["r_step"] = e.r_step;
  j["r_boundary"] = e.r_boundary;
  j["r_success"] = e.r_success;
  j["r_bonus"] = e.r_bonus;
  j["obs_mode"] = e.obs_mode == env::ObsMode::kComputational4 ? "computational4" : "full16";
  j["step_sizes_ghz"] = e.step_sizes;
  j["step_thresholds"] = e.step_thresholds;
  return j;
}

Json td_json(const rl::TdConfig& t) {
  Json j;
  j["alpha"] = t.alpha;
  j["gamma"] = t.gamma;
  j["epsilon_init"] = t.epsilon_init;
  j["epsilon_decay"] = t.epsilon_decay;
  j["epsilon_min"] = t.epsilon_min;
  j["episodes_max"] = t.episodes_max;
  j["target_mean_fidelity"] = t.target_mean_fidelity;
  j["mean_window"] = t.mean_window;
  j["stop_at_target"] = t.stop_at_target;
  j["lr"] = t.adam.lr;
  j["lr_decay"] = t.adam.lr_decay;
  j["replay_capacity"] = t.replay_capacity;
  j["replay_batch"] = t.replay_batch;
  j["target_sync_steps"] = t.target_sync_steps;
  return j;
}

Json ppo_json(const rl::PpoConfig& p) {
  Json j;
  j["gamma"] = p.gamma;
  j["lambda"] = p.lambda;
  j["clip_eps"] = p.clip_eps;
  j["lr"] = p.lr;
  j["horizon"] = p.horizon;
  j["n_envs"] = p.n_envs;
  j["epochs_per_iter"] = p.epochs_per_iter;
  j["minibatch"] = p.minibatch;
  j["value_coef"] = p.value_coef;
  j["entropy_coef"] = p.entropy_coef;
  j["iterations_max"] = p.iterations_max;
  j["log_std_init"] = p.log_std_init;
  j["state_dependent_std"] = p.state_dependent_std;
  j["normalize_advantages"] = p.normalize_advantages;
  j["parallel"] = p.parallel;
  j["stop_at_duration_ns"] = p.stop_at_duration_ns;
  return j;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool is_td(Algorithm a) { return a != Algorithm::kPpo; }

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kQLearning:
      return "qlearning";
    case Algorithm::kSarsa:
      return "sarsa";
    case Algorithm::kPpo:
      return "ppo";
  }
  return "unknown";
}

std::string toolkit_version() { return QDSIM_VERSION; }

void ExperimentConfig::validate() const {
  try {
    env.validate();
    td.validate();
    ppo.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
}

ExperimentConfig parse_config_text(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }

  ExperimentConfig cfg;
  Section top(root, "");
  std::string algorithm;
  if (top.find("algorithm") == nullptr) throw ConfigError("algorithm: required field is missing");
  top.string("algorithm", algorithm);
  cfg.algorithm = parse_algorithm(algorithm);
  top.unsigned_integer("seed", cfg.seed);
  std::string out_dir = cfg.output_dir.string();
  top.string("output_dir", out_dir);
  cfg.output_dir = out_dir;

  if (auto physics = top.child("physics")) {
    physics->numbers("u_ghz", cfg.env.u);
    physics->numbers("ez_ghz", cfg.env.ez);
    physics->finish();
  }
  if (auto e = top.child("env")) read_env(*e, cfg.env);

  auto td = top.child("td");
  auto ppo = top.child("ppo");
  if (td && !is_td(cfg.algorithm)) {
    throw ConfigError("td: section given but algorithm is " + std::string(to_string(cfg.algorithm)));
  }
  if (ppo && is_td(cfg.algorithm)) {
    throw ConfigError("ppo: section given but algorithm is " + std::string(to_string(cfg.algorithm)));
  }
  if (td) read_td(*td, cfg.td);
  if (ppo) read_ppo(*ppo, cfg.ppo);
  top.finish();

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  return parse_config_text(read_file(path));
}

std::string serialize_config(const ExperimentConfig& cfg) {
  Json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["physics"] = {{"u_ghz", cfg.env.u}, {"ez_ghz", cfg.env.ez}};
  j["env"] = env_json(cfg.env);
  if (is_td(cfg.algorithm)) {
    j["td"] = td_json(cfg.td);
  } else {
    j["ppo"] = ppo_json(cfg.ppo);
  }
  return j.dump(2) + "\n";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

std::string config_digest(const ExperimentConfig& cfg) { return sha256_hex(serialize_config(cfg)); }

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  Json j;
  j["config_digest"] = m.config_digest;
  j["toolkit_version"] = m.toolkit_version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["seed"] = m.seed;
  j["algorithm"] = to_string(m.algorithm);
  Json r;
  r["best_fidelity"] = m.summary.best_fidelity;
  r["best_duration_ns"] = m.summary.best_duration_ns;
  r["shortest_success_ns"] =
      m.summary.shortest_success_ns ? Json(*m.summary.shortest_success_ns) : Json(nullptr);
  r["records"] = m.summary.records;
  r["reached_target"] = m.summary.reached_target;
  j["result"] = r;
  write_file(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  try {
    const Json j = Json::parse(read_file(path));
    RunManifest m;
    m.config_digest = j.at("config_digest").get<std::string>();
    m.toolkit_version = j.at("toolkit_version").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    const Json& r = j.at("result");
    m.summary.best_fidelity = r.at("best_fidelity").get<double>();
    m.summary.best_duration_ns = r.at("best_duration_ns").get<double>();
    if (!r.at("shortest_success_ns").is_null()) {
      m.summary.shortest_success_ns = r.at("shortest_success_ns").get<double>();
    }
    m.summary.records = r.at("records").get<int>();
    m.summary.reached_target = r.at("reached_target").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
}

bool verify_manifest(const std::filesystem::path& run_dir) {
  const RunManifest m = read_manifest(run_dir / files::kManifest);
  return sha256_hex(read_file(run_dir / files::kConfig)) == m.config_digest;
}

RunManifest run_train(const ExperimentConfig& cfg, const std::filesystem::path& run_dir) {
  cfg.validate();
  const std::string serialized = serialize_config(cfg);

  RunManifest manifest;
  manifest.config_digest = sha256_hex(serialized);
  manifest.toolkit_version = toolkit_version();
  manifest.started_at = utc_now();
  manifest.seed = cfg.seed;
  manifest.algorithm = cfg.algorithm;

  std::filesystem::create_directories(run_dir);
  write_file(run_dir / files::kConfig, serialized);
  std::ofstream metrics(run_dir / files::kMetrics, std::ios::binary);
  std::ofstream timing(run_dir / files::kTiming, std::ios::binary);
  if (!metrics || !timing) throw ConfigError("cannot create metrics files in " + run_dir.string());

  nn::Checkpoint ckpt;
  const rl::BestGateTracker* best = nullptr;
  std::optional<rl::TdResult> td_result;
  std::optional<rl::PpoResult> ppo_result;

  if (is_td(cfg.algorithm)) {
    env::GateEnv environment(cfg.env);
    const std::string algo_name(to_string(cfg.algorithm));
    td_result = rl::train_td(
        environment,
        cfg.algorithm == Algorithm::kQLearning ? rl::TdAlgorithm::kQLearning
                                               : rl::TdAlgorithm::kSarsa,
        cfg.td, cfg.seed, [&](const rl::EpisodeStats& s) {
          metrics << episode_record(cfg.seed, algo_name, s) << '\n';
          timing << timing_record(s.episode, s.wall_ms) << '\n';
        });
    ckpt.networks.emplace("q", td_result->q_network);
    best = &td_result->best;
    manifest.summary.records = static_cast<int>(td_result->episodes.size());
    manifest.summary.reached_target = td_result->reached_target;
  } else {
    const env::EnvConfig env_cfg = cfg.env;
    ppo_result = rl::train_ppo([&env_cfg] { return env::GateEnv(env_cfg); }, cfg.ppo, cfg.seed,
                               [&](const rl::IterationStats& s) {
                                 metrics << iteration_record(cfg.seed, s) << '\n';
                                 timing << timing_record(s.iteration, s.wall_ms) << '\n';
                               });
    ckpt.networks.emplace("policy", ppo_result->policy.network);
    ckpt.networks.emplace("value", ppo_result->value);
    ckpt.vectors.emplace("log_std", ppo_result->policy.log_std);
    best = &ppo_result->best;
    manifest.summary.records = static_cast<int>(ppo_result->iterations.size());
    manifest.summary.reached_target = ppo_result->stopped_early;
  }
  metrics.close();
  timing.close();

  nn::save_checkpoint(run_dir / files::kCheckpoint, ckpt);
  write_schedule_csv(run_dir / files::kBestSchedule, best->best_schedule());
  manifest.summary.best_fidelity = best->best_fidelity();
  manifest.summary.best_duration_ns = best->best_duration_ns();
  if (std::isfinite(best->shortest_success_ns())) {
    manifest.summary.shortest_success_ns = best->shortest_success_ns();
  }

  export_plots(run_dir);
  manifest.finished_at = utc_now();
  write_manifest(run_dir / files::kManifest, manifest);
  return manifest;
}

}  // namespace qdsim::cli
