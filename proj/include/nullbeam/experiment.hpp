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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nullbeam/agent.hpp"
#include "nullbeam/channel.hpp"
#include "nullbeam/environment.hpp"
#include "nullbeam/io.hpp"
#include "nullbeam/surrogate.hpp"

namespace nullbeam {

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  std::string name = "experiment";
  ScenarioConfig scenario;
  /// `antennas` and `seed` are taken from the scenario and the run seed.
  ActorCriticConfig agent;
  SurrogateConfig surrogate;
  long unaware_iterations = 2000;
  long aware_iterations = 5000;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "runs";
  double angle_grid_deg = 0.1;

  /// Throws ConfigError naming every invalid field.
  void validate() const;
};

/// Every field is written, including defaults.
io::json to_json(const ExperimentConfig& cfg);
/// Missing fields keep their defaults. Unknown keys, wrong types and a
/// missing or unsupported `schema_version` raise ConfigError.
ExperimentConfig config_from_json(const io::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// A beam evaluated against a specific scenario.
struct BeamReport {
  PhaseVector phases;
  Metrics metrics;
  std::string scenario_fingerprint;
};

BeamReport make_report(const Scenario& s, const PhaseVector& phases);
io::BeamRecord to_record(const BeamReport& r, int bits);

struct Summary {
  std::vector<double> sir_before_db, sir_after_db, sir_gain_db;
  double inr_before_db = 0.0, inr_after_db = 0.0, inr_reduction_db = 0.0;
  double gain_before = 0.0, gain_after = 0.0;
  double gain_loss_db = 0.0;  ///< positive when the aware beam collects less signal
  double sinr_before_db = 0.0, sinr_after_db = 0.0;
  double rate_before = 0.0, rate_after = 0.0;
};

/// Compares two beams on one scenario. Throws std::invalid_argument when
/// the reports were made for different scenarios.
Summary summarize(const BeamReport& unaware, const BeamReport& aware);

io::json to_json(const Summary& s);
Summary summary_from_json(const io::json& j);

struct RunArtifact {
  std::uint64_t seed = 0;
  ExperimentConfig config;
  Scenario scenario;  ///< final scenario, interferers included
  std::optional<BeamReport> unaware, aware;
  std::vector<IterationRecord> unaware_log, aware_log;
  std::vector<double> angles;  ///< radians
  std::vector<double> unaware_pattern, aware_pattern;
  SidelobeSearch sidelobes;
  std::optional<Summary> summary;
  std::vector<RoundReport> rounds;
  std::size_t aware_measurements = 0;
  double runtime_seconds = 0.0;
  std::string failed_stage;  ///< empty on success
  std::string error;

  bool ok() const noexcept { return failed_stage.empty(); }
};

/// Unaware learning without interferers, pattern and sidelobe search,
/// interferer placement, aware learning, summary. A failing stage stops the
/// run and is recorded in the artifact instead of propagating.
RunArtifact run_pipeline(const ExperimentConfig& cfg, std::uint64_t seed);

/// Fixed file names inside `dir`: config.json, scenario.json, unaware_beam.json,
/// aware_beam.json, unaware_trajectory.csv, aware_trajectory.csv,
/// unaware_pattern.csv, aware_pattern.csv, summary.json and, on failure,
/// FAILED.json.
void write_artifact(const RunArtifact& a, const std::filesystem::path& dir);

std::filesystem::path run_directory(const ExperimentConfig& cfg, std::uint64_t seed);

/// Scenario with the interferers the standalone commands use: explicit ones
/// as configured, sidelobe ones on the matched quantized steering beam.
Scenario standalone_scenario(const ScenarioConfig& cfg);

struct OracleResult {
  PhaseVector phases;
  double sinr = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search over all (2^r)^M beams. Throws std::invalid_argument
/// above `max_beams`.
OracleResult exhaustive_search(const Scenario& s, std::uint64_t max_beams = 1ULL << 26);

struct SweepSettings {
  std::vector<std::size_t> sizes{50,   100,  200,  500,  1000,
                                 2000, 3000, 5000, 7500, 10000};
  std::vector<SurrogateMode> architectures{SurrogateMode::ModelBased, SurrogateMode::FC};
  int draws = 5;
  std::size_t holdout = 1000;
};

struct SweepPoint {
  std::size_t samples = 0;
  SurrogateMode architecture = SurrogateMode::ModelBased;
  std::vector<double> nmse;  ///< one per draw, held-out interference data

  double mean_nmse() const;
};

/// Held-out interference-prediction NMSE versus training-set size. Beams are
/// uniform draws from the codebook.
std::vector<SweepPoint> sweep_surrogate(const ExperimentConfig& cfg, const SweepSettings& sweep,
                                        std::uint64_t seed);

/// Uniform random codebook beams with their interference-plus-noise power.
SurrogateDataset sample_interference_dataset(ActualEnvironment& env, std::size_t n,
                                             std::uint64_t seed);

}  // namespace nullbeam
