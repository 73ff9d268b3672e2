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

// pulsectl: train, replay and export CZ pulse schedules for the double-dot
// simulator.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qdsim/errors.hpp"
#include "qdsim/experiment.hpp"
#include "qdsim/plots.hpp"
#include "qdsim/replay.hpp"
#include "qdsim/schedule.hpp"

namespace {

using namespace qdsim;

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_train(const std::string& config_path, const std::string& output_override) {
  cli::ExperimentConfig cfg = cli::parse_config(config_path);
  if (const char* env_dir = std::getenv(cli::kOutputDirEnv); env_dir && *env_dir) {
    cfg.output_dir = env_dir;
  }
  if (!output_override.empty()) cfg.output_dir = output_override;
  cfg.validate();

  std::cout << "training " << cli::to_string(cfg.algorithm) << " seed " << cfg.seed << " -> "
            << cfg.output_dir.string() << std::endl;
  const cli::RunManifest m = cli::run_train(cfg, cfg.output_dir);
  std::cout << "records " << m.summary.records << ", best fidelity " << fmt(m.summary.best_fidelity)
            << " at " << m.summary.best_duration_ns << " ns";
  if (m.summary.shortest_success_ns) {
    std::cout << ", shortest success " << *m.summary.shortest_success_ns << " ns";
  }
  std::cout << "\nconfig digest " << m.config_digest << std::endl;
  return 0;
}

int cmd_replay(const std::string& schedule_path, int sweep, const std::string& config_path,
               const std::string& trace_path) {
  env::EnvConfig env_cfg;
  if (!config_path.empty()) env_cfg = cli::parse_config(config_path).env;

  std::optional<PulseSchedule> schedule;
  if (!schedule_path.empty()) schedule = read_schedule_csv(schedule_path);

  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw ConfigError("cannot open " + trace_path + " for writing");
  }
  std::ostream& trace = trace_path.empty() ? std::cout : trace_file;

  if (sweep > 0) {
    Controls c{env_cfg.eps_init[0], env_cfg.eps_init[1], env_cfg.tun_init};
    if (schedule && !schedule->empty()) c = schedule->records.front().controls;
    const cli::SweepResult r = cli::sweep_duration(c, sweep, env_cfg);
    trace << "duration_ns\tfidelity\n";
    for (std::size_t k = 0; k < r.fidelity_by_duration.size(); ++k) {
      trace << fmt(static_cast<double>(k + 1) * env_cfg.dt_ns) << '\t'
            << fmt(r.fidelity_by_duration[k]) << '\n';
    }
    trace.flush();
    std::cerr << "constant pulse eps0=" << fmt(c.eps0) << " eps1=" << fmt(c.eps1)
              << " tunnel=" << fmt(c.tun) << " GHz: best fidelity " << fmt(r.best_fidelity)
              << " at " << fmt(r.best_steps * env_cfg.dt_ns) << " ns\n";
    return 0;
  }

  if (!schedule) throw ConfigError("replay: a schedule CSV is required without --sweep-duration");
  const cli::ReplayResult r = cli::run_replay(*schedule, env_cfg);
  trace << "step\tfidelity\n";
  for (std::size_t k = 0; k < r.fidelity_trace.size(); ++k) {
    trace << k << '\t' << fmt(r.fidelity_trace[k]) << '\n';
  }
  trace.flush();
  std::cerr << "steps " << schedule->size() << ", duration "
            << fmt(static_cast<double>(schedule->size()) * env_cfg.dt_ns) << " ns\n"
            << "fidelity " << fmt(r.final.fidelity) << " (Tr(U'U) " << fmt(r.final.unitarity_trace)
            << ", |Tr(CZ'U)|^2 " << fmt(r.final.overlap) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and verify CZ control pulses for a double quantum dot"};
  app.require_subcommand(1);

  std::string train_config;
  std::string output_dir;
  auto* train = app.add_subcommand("train", "Run a training experiment from a config file");
  train->add_option("config", train_config, "Experiment config (JSON)")->required();
  train->add_option("-o,--output-dir", output_dir,
                    std::string("Run directory (overrides config and $") + cli::kOutputDirEnv + ")");

  std::string schedule_path;
  std::string replay_config;
  std::string trace_path;
  int sweep = 0;
  auto* replay = app.add_subcommand("replay", "Evolve a stored pulse schedule and score it against CZ");
  replay->add_option("schedule", schedule_path, "Pulse schedule CSV");
  replay->add_option("--sweep-duration", sweep,
                     "Hold the first control row (or the init values) constant for 1..N ns "
                     "and report fidelity per duration")
      ->check(CLI::PositiveNumber);
  replay->add_option("-c,--config", replay_config, "Take physics constants and bounds from a config");
  replay->add_option("--trace", trace_path, "Write the per-step trace here instead of stdout");

  std::string run_dir;
  auto* plots = app.add_subcommand("export-plots", "Re-derive plot-data TSV files for a run");
  plots->add_option("run_dir", run_dir, "Run directory")->required();

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a config file and print its digest");
  validate->add_option("config", validate_config, "Experiment config (JSON)")->required();

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Check a run's config against its manifest digest");
  verify->add_option("run_dir", verify_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(train_config, output_dir);
    if (*replay) return cmd_replay(schedule_path, sweep, replay_config, trace_path);
    if (*plots) {
      cli::export_plots(run_dir);
      std::cout << "plot data written to " << run_dir << std::endl;
      return 0;
    }
    if (*validate) {
      const cli::ExperimentConfig cfg = cli::parse_config(validate_config);
      std::cout << "ok " << cli::to_string(cfg.algorithm) << " seed " << cfg.seed << " digest "
                << cli::config_digest(cfg) << std::endl;
      return 0;
    }
    if (*verify) {
      if (cli::verify_manifest(verify_dir)) {
        std::cout << "ok" << std::endl;
        return 0;
      }
      std::cerr << "config digest mismatch in " << verify_dir << std::endl;
      return kExitInvalid;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInvalid;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitRuntime;
  }
  return 0;
}
