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

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "nullbeam/array.hpp"
#include "nullbeam/channel.hpp"

namespace nullbeam {

/// One on/off measurement pair taken with the same beam.
struct PowerMeasurement {
  double signal_interference_noise = 0.0;  ///< P_S+I+N, target transmitting
  double interference_noise = 0.0;         ///< P_I+N, target silent

  double signal() const noexcept { return signal_interference_noise - interference_noise; }
};

struct StepOutcome {
  PhaseVector next_state;
  int reward = -1;
  double sinr = 0.0;  ///< linear
  PowerMeasurement measurement;
};

/// Analytic link metrics of a beam. Ratios in dB may be +/-inf for perfectly
/// nulled or absent interferers; serialization caps them at +/-200 dB.
struct Metrics {
  std::vector<double> sir_db;  ///< one per interferer
  double inr_db = 0.0;
  double snr_db = 0.0;
  double sinr_db = 0.0;
  double sinr = 0.0;
  double signal_gain = 0.0;  ///< |w^H h|^2
  std::vector<double> interferer_gain;  ///< |w^H h_k|^2
  double rate = 0.0;         ///< log2(1 + SINR), bits/s/Hz
};

/// SINR from an on/off measurement pair, numerator clamped at zero.
/// Throws MeasurementError when P_I+N <= 0.
double estimate_sinr(const PowerMeasurement& m);

/// +1 iff `sinr` strictly exceeds `prev_sinr`.
inline int binary_reward(double sinr, double prev_sinr) noexcept {
  return sinr > prev_sinr ? 1 : -1;
}

/// Noiseless expected powers.
double interference_plus_noise_power(const Scenario& s, const Combiner& w);
double signal_power(const Scenario& s, const Combiner& w);

/// |w^H h|^2 P_x / (sum_k |w^H h_k|^2 P_x + sigma^2)
double analytic_sinr(const Scenario& s, const Combiner& w);

Metrics full_metrics(const Scenario& s, const Combiner& w);

/// Anything that can score a beam from power readings: the emulated radio
/// or a learned surrogate. `step` is shared so both honour one contract.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const PhaseCodebook& codebook() const = 0;
  virtual int antennas() const = 0;
  virtual PowerMeasurement measure(const Combiner& w) = 0;

  /// Number of on/off measurement pairs performed so far.
  std::size_t measurement_count() const noexcept { return measurements_; }

  /// Applies `action` (must already lie in the codebook), measures it and
  /// scores it against `prev_sinr`. Throws std::invalid_argument otherwise.
  StepOutcome step(double prev_sinr, const PhaseVector& action);

  /// SINR of a beam without producing a reward.
  double evaluate(const PhaseVector& state);

 protected:
  std::size_t measurements_ = 0;
};

/// Emulates the radio with expected powers computed from the channels, plus
/// an optional log-normal perturbation of each reading.
class ActualEnvironment final : public Environment {
 public:
  explicit ActualEnvironment(Scenario scenario, std::uint64_t noise_seed = 0);

  const PhaseCodebook& codebook() const override { return scenario_.codebook; }
  int antennas() const override { return scenario_.geometry.antennas; }
  PowerMeasurement measure(const Combiner& w) override;

  double measure_interference_plus_noise(const Combiner& w);
  double measure_signal_plus_interference_plus_noise(const Combiner& w);

  const Scenario& scenario() const noexcept { return scenario_; }

 private:
  double perturb(double power);

  Scenario scenario_;
  std::mt19937_64 rng_;
};

}  // namespace nullbeam
