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

#include "nullbeam/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam {

Channel::Channel(const ArrayGeometry& geometry, std::vector<PathComponent> paths)
    : paths_(std::move(paths)) {
  if (paths_.empty()) throw std::invalid_argument("channel needs at least one path");
  h_ = Eigen::VectorXcd::Zero(geometry.antennas);
  for (const auto& p : paths_) {
    if (!std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag())) {
      throw std::invalid_argument("path gain must be finite");
    }
    h_ += p.gain * array_response(geometry, p.azimuth, p.elevation);
  }
}

Channel los_channel(const ArrayGeometry& geometry, cdouble gain, double azimuth) {
  return Channel(geometry, {PathComponent{gain, azimuth, 0.0}});
}

Channel multipath_channel(const ArrayGeometry& geometry,
                          std::vector<PathComponent> paths) {
  return Channel(geometry, std::move(paths));
}

void Scenario::validate() const {
  std::vector<std::string> bad;
  if (geometry.antennas < 1) bad.emplace_back("antennas");
  if (!(geometry.spacing > 0.0)) bad.emplace_back("element_spacing");
  if (target.vector().size() != geometry.antennas) bad.emplace_back("target");
  for (std::size_t k = 0; k < interferers.size(); ++k) {
    if (interferers[k].vector().size() != geometry.antennas) {
      bad.push_back("interferers[" + std::to_string(k) + "]");
    }
  }
  if (!(transmit_power > 0.0) || !std::isfinite(transmit_power)) {
    bad.emplace_back("transmit_power");
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) bad.emplace_back("noise_power");
  if (!(measurement_noise_db >= 0.0)) bad.emplace_back("measurement_noise_db");
  if (!bad.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(msg, std::move(bad));
  }
}

void ScenarioConfig::validate() const {
  std::vector<std::string> bad;
  if (antennas < 1) bad.emplace_back("antennas");
  if (!(element_spacing > 0.0)) bad.emplace_back("element_spacing");
  if (phase_bits < 1 || phase_bits > PhaseCodebook::kMaxBits) bad.emplace_back("phase_bits");
  if (!(transmit_power > 0.0)) bad.emplace_back("transmit_power");
  if (noise_power && !(*noise_power > 0.0)) bad.emplace_back("noise_power");
  if (!std::isfinite(snr_db)) bad.emplace_back("snr_db");
  if (snr_reference_antennas < 1) bad.emplace_back("snr_reference_antennas");
  if (interferer_count < 0) bad.emplace_back("interferer_count");
  if (target_azimuth_deg && std::abs(*target_azimuth_deg) > 90.0) {
    bad.emplace_back("target_azimuth_deg");
  }
  if (!(target_azimuth_range_deg >= 0.0 && target_azimuth_range_deg <= 90.0)) {
    bad.emplace_back("target_azimuth_range_deg");
  }
  if (placement == Placement::Explicit &&
      interferers.size() != static_cast<std::size_t>(std::max(interferer_count, 0))) {
    bad.emplace_back("interferers");
  }
  for (std::size_t k = 0; k < interferers.size(); ++k) {
    if (std::abs(interferers[k].azimuth_deg) > 90.0) {
      bad.push_back("interferers[" + std::to_string(k) + "].azimuth_deg");
    }
  }
  if (!(measurement_noise_db >= 0.0)) bad.emplace_back("measurement_noise_db");
  if (!bad.empty()) {
    std::string msg = "invalid scenario config:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(msg, std::move(bad));
  }
}

namespace {

// Independent streams per role so adding interferers never perturbs the
// target draw.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t role) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(role), 0x6e756c6cU};
  return std::mt19937_64(seq);
}

double draw_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  return u(rng);
}

}  // namespace

double target_azimuth(const ScenarioConfig& config) {
  if (config.target_azimuth_deg) return deg2rad(*config.target_azimuth_deg);
  auto rng = stream(config.seed, 1);
  std::uniform_real_distribution<double> u(-config.target_azimuth_range_deg,
                                           config.target_azimuth_range_deg);
  return deg2rad(u(rng));
}

void add_los_interferer(Scenario& scenario, double azimuth,
                        double relative_gain_db, std::uint64_t phase_seed) {
  auto rng = stream(phase_seed, 100 + scenario.interferers.size());
  const double magnitude = std::sqrt(from_db(relative_gain_db));
  scenario.interferers.push_back(
      los_channel(scenario.geometry, std::polar(magnitude, draw_phase(rng)), azimuth));
}

Scenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario s;
  s.geometry = ArrayGeometry{config.antennas, config.element_spacing};
  s.codebook = PhaseCodebook(config.phase_bits);
  s.transmit_power = config.transmit_power;
  s.noise_power = config.noise_power.value_or(config.transmit_power * config.snr_reference_antennas /
                                              from_db(config.snr_db));
  s.measurement_noise_db = config.measurement_noise_db;
  s.seed = config.seed;

  auto rng = stream(config.seed, 0);
  s.target = los_channel(s.geometry, std::polar(1.0, draw_phase(rng)), target_azimuth(config));

  if (config.placement == Placement::Explicit) {
    for (const auto& spec : config.interferers) {
      add_los_interferer(s, deg2rad(spec.azimuth_deg), spec.relative_gain_db, config.seed);
    }
  }
  s.validate();
  return s;
}

}  // namespace nullbeam
