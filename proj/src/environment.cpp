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

#include "nullbeam/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam {

double estimate_sinr(const PowerMeasurement& m) {
  if (!(m.interference_noise > 0.0)) {
    throw MeasurementError("interference-plus-noise reading must be positive");
  }
  return std::max(0.0, m.signal()) / m.interference_noise;
}

double interference_plus_noise_power(const Scenario& s, const Combiner& w) {
  double total = 0.0;
  for (const auto& h : s.interferers) total += std::norm(w.inner(h.vector()));
  return total * s.transmit_power + s.noise_power;
}

double signal_power(const Scenario& s, const Combiner& w) {
  return std::norm(w.inner(s.target.vector())) * s.transmit_power;
}

double analytic_sinr(const Scenario& s, const Combiner& w) {
  return signal_power(s, w) / interference_plus_noise_power(s, w);
}

Metrics full_metrics(const Scenario& s, const Combiner& w) {
  Metrics m;
  m.signal_gain = std::norm(w.inner(s.target.vector()));
  double interference = 0.0;
  for (const auto& h : s.interferers) {
    const double g = std::norm(w.inner(h.vector()));
    m.interferer_gain.push_back(g);
    m.sir_db.push_back(g > 0.0 ? to_db(m.signal_gain / g)
                               : std::numeric_limits<double>::infinity());
    interference += g * s.transmit_power;
  }
  m.inr_db = to_db(interference / s.noise_power);
  m.snr_db = to_db(m.signal_gain * s.transmit_power / s.noise_power);
  m.sinr = m.signal_gain * s.transmit_power / (interference + s.noise_power);
  m.sinr_db = to_db(m.sinr);
  m.rate = std::log2(1.0 + m.sinr);
  return m;
}

StepOutcome Environment::step(double prev_sinr, const PhaseVector& action) {
  if (action.size() != antennas()) {
    throw std::invalid_argument("action length does not match the array");
  }
  if (!is_quantized(action, codebook())) {
    throw std::invalid_argument("action must be quantized to the phase codebook");
  }
  StepOutcome out;
  out.next_state = action;
  out.measurement = measure(Combiner::from_phases(action));
  out.sinr = estimate_sinr(out.measurement);
  out.reward = binary_reward(out.sinr, prev_sinr);
  return out;
}

double Environment::evaluate(const PhaseVector& state) {
  return estimate_sinr(measure(Combiner::from_phases(state)));
}

ActualEnvironment::ActualEnvironment(Scenario scenario, std::uint64_t noise_seed)
    : scenario_(std::move(scenario)), rng_(noise_seed) {
  scenario_.validate();
}

double ActualEnvironment::perturb(double power) {
  if (scenario_.measurement_noise_db <= 0.0) return power;
  // ln(10)/10 converts a dB standard deviation to natural-log units.
  std::normal_distribution<double> n(0.0, scenario_.measurement_noise_db * std::log(10.0) / 10.0);
  return power * std::exp(n(rng_));
}

double ActualEnvironment::measure_interference_plus_noise(const Combiner& w) {
  return perturb(interference_plus_noise_power(scenario_, w));
}

double ActualEnvironment::measure_signal_plus_interference_plus_noise(const Combiner& w) {
  return perturb(signal_power(scenario_, w) + interference_plus_noise_power(scenario_, w));
}

PowerMeasurement ActualEnvironment::measure(const Combiner& w) {
  ++measurements_;
  PowerMeasurement m;
  m.interference_noise = measure_interference_plus_noise(w);
  m.signal_interference_noise = measure_signal_plus_interference_plus_noise(w);
  return m;
}

}  // namespace nullbeam
