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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullbeam/agent.hpp"
#include "nullbeam/array.hpp"
#include "nullbeam/channel.hpp"
#include "nullbeam/environment.hpp"
#include "nullbeam/surrogate.hpp"

namespace nullbeam::io {

using json = nlohmann::json;

/// Largest magnitude written for a dB quantity; infinities map to it.
inline constexpr double kDbCap = 200.0;
double cap_db(double db) noexcept;

json to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

/// Hash of the serialized scenario, used to tie beams to their scenario.
std::string fingerprint(const Scenario& s);

json to_json(const Metrics& m);
Metrics metrics_from_json(const json& j);

struct BeamRecord {
  PhaseVector phases;
  int bits = 3;
  std::optional<Metrics> metrics;
  std::string scenario_fingerprint;
};

json to_json(const BeamRecord& b);
BeamRecord beam_from_json(const json& j);

/// Header: iter,sinr_db,sir_db_1..sir_db_K,inr_db,signal_gain_linear,reward,
/// explore_sigma,critic_loss,actor_objective,best_sinr_db,source.
/// Records without analytic metrics leave those columns empty.
void write_trajectory_csv(std::ostream& out, std::span<const IterationRecord> log,
                          std::size_t interferers);

/// Header: angle_deg,gain_linear,gain_db.
void write_pattern_csv(std::ostream& out, std::span<const double> angles,
                       std::span<const double> gains);

/// Header: re_w1..re_wM,im_w1..im_wM,power_linear.
void write_dataset_csv(std::ostream& out, const SurrogateDataset& data);
SurrogateDataset read_dataset_csv(std::istream& in, PowerKind kind);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nullbeam::io
