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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nullbeam/array.hpp"

namespace nullbeam {

struct PathComponent {
  cdouble gain;          ///< complex gain, path loss included
  double azimuth = 0.0;  ///< radians
  double elevation = 0.0;
};

/// Geometric channel h = sum_l alpha_l a(phi_l, theta_l).
class Channel {
 public:
  Channel() = default;
  Channel(const ArrayGeometry& geometry, std::vector<PathComponent> paths);

  const std::vector<PathComponent>& paths() const noexcept { return paths_; }
  const Eigen::VectorXcd& vector() const noexcept { return h_; }

 private:
  std::vector<PathComponent> paths_;
  Eigen::VectorXcd h_;
};

Channel los_channel(const ArrayGeometry& geometry, cdouble gain, double azimuth);

/// Throws std::invalid_argument on an empty path list.
Channel multipath_channel(const ArrayGeometry& geometry,
                          std::vector<PathComponent> paths);

/// Everything the environment needs to emulate measurements.
struct Scenario {
  ArrayGeometry geometry;
  PhaseCodebook codebook{3};
  Channel target;
  std::vector<Channel> interferers;
  double transmit_power = 1.0;  ///< P_x, linear watts
  double noise_power = 1.0;     ///< sigma^2, linear watts
  double measurement_noise_db = 0.0;
  std::uint64_t seed = 0;

  std::size_t num_interferers() const noexcept { return interferers.size(); }
  /// Throws ConfigError naming every violated field.
  void validate() const;
};

/// How interferers are positioned by the pipeline.
enum class Placement { Sidelobes, Explicit };

struct InterfererSpec {
  double azimuth_deg = 0.0;
  double relative_gain_db = 0.0;  ///< |alpha_k|^2 relative to the target
};

/// Inputs to `build_scenario`. Open modelling choices all surface here with
/// their defaults.
struct ScenarioConfig {
  int antennas = 8;
  double element_spacing = 0.5;
  int phase_bits = 3;
  std::optional<double> target_azimuth_deg = 0.0;  ///< nullopt: seeded draw
  double target_azimuth_range_deg = 45.0;
  /// SNR of the target through a matched beam of `snr_reference_antennas`
  /// elements: ref * |alpha|^2 P_x / sigma^2. The noise power is then the
  /// same for every array size.
  double snr_db = 20.0;
  int snr_reference_antennas = 8;
  double transmit_power = 1.0;
  std::optional<double> noise_power;  ///< overrides snr_db when set
  int interferer_count = 0;
  Placement placement = Placement::Sidelobes;
  std::vector<InterfererSpec> interferers;  ///< used with Placement::Explicit
  double interferer_relative_gain_db = 0.0;  ///< default for sidelobe placement
  double measurement_noise_db = 0.0;
  std::uint64_t seed = 1;

  /// Throws ConfigError listing every offending field.
  void validate() const;
};

/// Builds the target channel plus any explicitly placed interferers.
/// Sidelobe-placed interferers are left for the pipeline to add.
Scenario build_scenario(const ScenarioConfig& config);

/// Adds a LOS interferer with a seeded random phase.
void add_los_interferer(Scenario& scenario, double azimuth,
                        double relative_gain_db, std::uint64_t phase_seed);

double target_azimuth(const ScenarioConfig& config);

}  // namespace nullbeam
