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

#include "qdsim/plots.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qdsim/errors.hpp"
#include "qdsim/experiment.hpp"
#include "qdsim/schedule.hpp"

namespace qdsim::cli {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_tsv(const std::filesystem::path& path, const char* header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << header << '\n';
  return out;
}

void require(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("export-plots: missing run artifact " + path.string());
  }
}

}  // namespace

std::vector<double> trailing_means(std::span<const double> values, int window) {
  std::vector<double> out;
  if (window < 1 || values.size() < static_cast<std::size_t>(window)) return out;
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t end = w; end <= values.size(); ++end) {
    double sum = 0.0;
    for (std::size_t i = end - w; i < end; ++i) sum += values[i];
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

void export_plots(const std::filesystem::path& run_dir) {
  const auto config_path = run_dir / files::kConfig;
  const auto metrics_path = run_dir / files::kMetrics;
  const auto schedule_path = run_dir / files::kBestSchedule;
  require(config_path);
  require(metrics_path);
  require(schedule_path);

  const ExperimentConfig cfg = parse_config(config_path);
  const bool ppo = cfg.algorithm == Algorithm::kPpo;

  std::vector<double> fidelities;
  std::ifstream metrics(metrics_path);
  std::string line;
  int line_no = 0;
  while (std::getline(metrics, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      fidelities.push_back(j.at(ppo ? "mean_final_fidelity" : "final_fidelity").get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(metrics_path.string() + " line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }

  {
    auto out = open_tsv(run_dir / "fidelity_vs_episode.tsv",
                        ppo ? "iteration\tmean_fidelity" : "episode\tmean_fidelity");
    const std::vector<double> means = trailing_means(fidelities, kFidelityWindow);
    for (std::size_t i = 0; i < means.size(); ++i) {
      out << (i + kFidelityWindow - 1) << '\t' << fmt(means[i]) << '\n';
    }
  }

  const PulseSchedule schedule = read_schedule_csv(schedule_path);
  auto tunnel = open_tsv(run_dir / "tunnel_vs_time.tsv", "time_ns\ttunnel_ghz");
  auto detuning = open_tsv(run_dir / "detuning_vs_time.tsv", "time_ns\tdetuning_ghz");
  auto bias0 = open_tsv(run_dir / "bias0_vs_time.tsv", "time_ns\teps0_ghz");
  auto bias1 = open_tsv(run_dir / "bias1_vs_time.tsv", "time_ns\teps1_ghz");
  for (const PulseRecord& r : schedule.records) {
    const std::string t = fmt(r.step * cfg.env.dt_ns);
    tunnel << t << '\t' << fmt(r.controls.tun) << '\n';
    detuning << t << '\t' << fmt(r.controls.detuning()) << '\n';
    bias0 << t << '\t' << fmt(r.controls.eps0) << '\n';
    bias1 << t << '\t' << fmt(r.controls.eps1) << '\n';
  }
}

}  // namespace qdsim::cli
