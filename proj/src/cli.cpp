// Copyright 2026 The nullbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nullbeam/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nullbeam/errors.hpp"
#include "nullbeam/experiment.hpp"
#include "nullbeam/io.hpp"

namespace nullbeam {

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string surrogate;
  std::optional<int> antennas, bits, interferers;
  std::optional<long> iterations;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)");
  cmd->add_option("--seed", o.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--surrogate", o.surrogate, "Surrogate mode")
      ->check(CLI::IsMember({"none", "model", "fc"}));
  cmd->add_option("--antennas", o.antennas, "Array size M")->check(CLI::Range(1, 4096));
  cmd->add_option("--bits", o.bits, "Phase-shifter resolution r")->check(CLI::Range(1, 16));
  cmd->add_option("--interferers", o.interferers, "Interferer count K")->check(CLI::NonNegativeNumber);
  cmd->add_option("--iterations", o.iterations, "Learning iterations")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.surrogate.empty()) cfg.surrogate.mode = surrogate_mode_from_string(o.surrogate);
  if (o.antennas) cfg.scenario.antennas = *o.antennas;
  if (o.bits) cfg.scenario.phase_bits = *o.bits;
  if (o.interferers) cfg.scenario.interferer_count = *o.interferers;
  if (o.iterations) cfg.aware_iterations = *o.iterations;
  cfg.validate();
  return cfg;
}

std::string fixed(double x, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << io::cap_db(x);
  return s.str();
}

int cmd_run(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve(o);
  int failures = 0;
  for (std::uint64_t seed : cfg.seeds) {
    const RunArtifact a = run_pipeline(cfg, seed);
    const auto dir = run_directory(cfg, seed);
    write_artifact(a, dir);
    if (!a.ok()) {
      err << "seed " << seed << ": failed at stage '" << a.failed_stage << "': " << a.error << "\n";
      ++failures;
      continue;
    }
    const Summary& s = *a.summary;
    out << "seed " << seed << ": sir gain";
    for (double d : s.sir_gain_db) out << ' ' << fixed(d);
    out << " dB, gain loss " << fixed(s.gain_loss_db) << " dB, sinr " << fixed(s.sinr_before_db)
        << " -> " << fixed(s.sinr_after_db) << " dB, " << dir.string() << "\n";
  }
  return failures ? 1 : 0;
}

int cmd_learn(const CommonOptions& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve(o);
  for (std::uint64_t seed : cfg.seeds) {
    ScenarioConfig sc = cfg.scenario;
    sc.seed = seed;
    const Scenario s = standalone_scenario(sc);
    ActualEnvironment env(s, seed);
    ActorCriticConfig agent = cfg.agent;
    agent.antennas = sc.antennas;
    agent.seed = seed;
    SurrogateConfig sg = cfg.surrogate;
    sg.switching.total_iterations = cfg.aware_iterations;
    sg.seed = seed;
    const AssistedResult r = run_assisted_learning(env, agent, sg, &s);

    const auto dir = cfg.output_dir / cfg.name / ("learn_seed_" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    const BeamReport rep = make_report(s, r.best_state);
    io::write_json_file(dir / "scenario.json", io::to_json(s));
    io::write_json_file(dir / "beam.json", io::to_json(to_record(rep, sc.phase_bits)));
    std::ofstream csv(dir / "trajectory.csv");
    io::write_trajectory_csv(csv, r.log, s.num_interferers());
    out << "seed " << seed << ": best sinr " << fixed(rep.metrics.sinr_db) << " dB after "
        << r.agent_iterations << " iterations, " << r.real_measurements
        << " real measurements, " << dir.string() << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::size_t>& sizes, int draws,
              std::ostream& out) {
  const ExperimentConfig cfg = resolve(o);
  SweepSettings sweep;
  if (!sizes.empty()) sweep.sizes = sizes;
  sweep.draws = draws;
  const auto points = sweep_surrogate(cfg, sweep, cfg.seeds.front());

  const auto dir = cfg.output_dir / cfg.name;
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "surrogate_sweep.csv");
  csv << "samples,architecture,draw,nmse\n";
  out << "held-out interference NMSE (mean of " << draws << " draws)\n";
  out << std::setw(8) << "samples" << std::setw(8) << "arch" << std::setw(14) << "nmse\n";
  for (const auto& p : points) {
    for (std::size_t d = 0; d < p.nmse.size(); ++d) {
      csv << p.samples << ',' << to_string(p.architecture) << ',' << d << ','
          << std::setprecision(17) << p.nmse[d] << '\n';
    }
    out << std::setw(8) << p.samples << std::setw(8) << to_string(p.architecture)
        << std::setw(14) << std::scientific << std::setprecision(4) << p.mean_nmse()
        << std::defaultfloat << "\n";
  }
  return 0;
}

int cmd_pattern(const CommonOptions& o, const std::string& beam_path, std::optional<double> grid,
                std::ostream& out) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  const io::BeamRecord beam = io::beam_from_json(io::read_json_file(beam_path));
  const ArrayGeometry g{static_cast<int>(beam.phases.size()), cfg.scenario.element_spacing};
  const auto angles = angle_grid(grid.value_or(cfg.angle_grid_deg));
  const auto gains = beam_pattern(Combiner::from_phases(beam.phases), angles, g);
  if (o.out.empty()) {
    io::write_pattern_csv(out, angles, gains);
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    io::write_pattern_csv(f, angles, gains);
  }
  return 0;
}

int cmd_oracle(const CommonOptions& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve(o);
  ScenarioConfig sc = cfg.scenario;
  sc.seed = cfg.seeds.front();
  const Scenario s = standalone_scenario(sc);
  const OracleResult r = exhaustive_search(s);
  const Metrics m = full_metrics(s, Combiner::from_phases(r.phases));
  out << "evaluated " << r.evaluated << " beams\n";
  out << "best phases (rad):";
  for (double p : r.phases) out << ' ' << std::setprecision(6) << p;
  out << "\nbest sinr " << fixed(m.sinr_db, 4) << " dB, gain " << fixed(m.signal_gain, 4);
  for (std::size_t k = 0; k < m.sir_db.size(); ++k) out << ", sir" << k + 1 << ' ' << fixed(m.sir_db[k]) << " dB";
  out << "\n";
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    io::write_json_file(std::filesystem::path(o.out) / "oracle_beam.json",
                        io::to_json(to_record(make_report(s, r.phases), sc.phase_bits)));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interference-aware analog beam learning from power measurements", "nullbeam"};
  app.require_subcommand(1);

  CommonOptions run_o, learn_o, sweep_o, pattern_o, oracle_o;
  auto* run = app.add_subcommand("run", "Unaware beam, interferer placement, aware beam");
  add_common(run, run_o);
  auto* learn = app.add_subcommand("learn", "Learn one beam against a fixed scenario");
  add_common(learn, learn_o);
  auto* sweep = app.add_subcommand("sweep-surrogate", "Prediction accuracy versus dataset size");
  add_common(sweep, sweep_o);
  std::vector<std::size_t> sizes;
  int draws = 5;
  sweep->add_option("--sizes", sizes, "Training-set sizes");
  sweep->add_option("--draws", draws, "Dataset draws per size")->check(CLI::PositiveNumber);
  auto* pattern = app.add_subcommand("pattern", "Evaluate a saved beam over an angle grid");
  std::string beam_path;
  std::optional<double> grid;
  pattern->add_option("--beam", beam_path, "Beam JSON")->required();
  pattern->add_option("--config", pattern_o.config, "Experiment config (JSON)");
  pattern->add_option("--out", pattern_o.out, "CSV file (default: stdout)");
  pattern->add_option("--grid", grid, "Angle step in degrees")->check(CLI::PositiveNumber);
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search over every codebook beam");
  add_common(oracle, oracle_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(run_o, out, err);
    if (*learn) return cmd_learn(learn_o, out);
    if (*sweep) return cmd_sweep(sweep_o, sizes, draws, out);
    if (*pattern) return cmd_pattern(pattern_o, beam_path, grid, out);
    if (*oracle) return cmd_oracle(oracle_o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace nullbeam
