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

#include "nullbeam/array.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nullbeam {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kUnitModulusTol = 1e-12;
}  // namespace

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw std::invalid_argument("phase codebook bits must be in [1, 16], got " +
                                std::to_string(bits));
  }
  const long half = 1L << (bits - 1);
  step_ = kPi / static_cast<double>(half);
  values_.reserve(static_cast<std::size_t>(2 * half));
  // Integer multiples of the step keep 0 and pi exact.
  for (long n = -half + 1; n <= half; ++n) {
    values_.push_back(static_cast<double>(n) * step_);
  }
  values_.back() = kPi;
}

std::size_t PhaseCodebook::index_of(double theta) const noexcept {
  const long last = static_cast<long>(values_.size()) - 1;
  const long offset = static_cast<long>(values_.size() / 2) - 1;
  const long guess = static_cast<long>(std::floor(theta / step_)) + offset;
  long best = std::clamp(guess - 1, 0L, last);
  double best_dist = std::abs(theta - values_[static_cast<std::size_t>(best)]);
  for (long i = guess; i <= guess + 2; ++i) {
    const long k = std::clamp(i, 0L, last);
    const double d = std::abs(theta - values_[static_cast<std::size_t>(k)]);
    // Values ascend, so a strict comparison keeps the smaller value on ties.
    if (d < best_dist) {
      best = k;
      best_dist = d;
    }
  }
  return static_cast<std::size_t>(best);
}

double PhaseCodebook::quantize(double theta) const noexcept {
  return values_[index_of(theta)];
}

bool PhaseCodebook::contains(double theta) const noexcept {
  return std::binary_search(values_.begin(), values_.end(), theta);
}

PhaseCodebook make_codebook(int bits) { return PhaseCodebook(bits); }

PhaseVector quantize(const PhaseVector& phases, const PhaseCodebook& codebook) {
  PhaseVector out(phases.size());
  for (Eigen::Index m = 0; m < phases.size(); ++m) {
    out[m] = codebook.quantize(phases[m]);
  }
  return out;
}

bool is_quantized(const PhaseVector& phases, const PhaseCodebook& codebook) {
  return std::all_of(phases.begin(), phases.end(),
                     [&](double p) { return codebook.contains(p); });
}

double wrap_phase(double theta) noexcept {
  double r = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Combiner Combiner::from_phases(const PhaseVector& phases) {
  const Eigen::Index m = phases.size();
  if (m < 1) throw std::invalid_argument("phase vector must be nonempty");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Eigen::VectorXcd w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    w[i] = std::polar(scale, phases[i]);
  }
  return Combiner(std::move(w));
}

Combiner Combiner::from_weights(Eigen::VectorXcd weights) {
  const Eigen::Index m = weights.size();
  if (m < 1) throw std::invalid_argument("combiner must be nonempty");
  const double expected = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(std::abs(weights[i]) - expected) > kUnitModulusTol) {
      throw std::invalid_argument("combiner entry " + std::to_string(i) +
                                  " violates |w_m| = 1/sqrt(M)");
    }
  }
  return Combiner(std::move(weights));
}

PhaseVector Combiner::phases() const {
  PhaseVector p(w_.size());
  for (Eigen::Index i = 0; i < w_.size(); ++i) p[i] = std::arg(w_[i]);
  return p;
}

cdouble Combiner::inner(const Eigen::VectorXcd& v) const {
  if (v.size() != w_.size()) {
    throw std::invalid_argument("combiner/channel dimension mismatch");
  }
  return w_.dot(v);  // Eigen's dot conjugates the left operand
}

void ArrayGeometry::validate() const {
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
}

Eigen::VectorXcd array_response(const ArrayGeometry& geometry, double azimuth,
                                double elevation) {
  geometry.validate();
  const double progression =
      2.0 * kPi * geometry.spacing * std::sin(azimuth) * std::cos(elevation);
  Eigen::VectorXcd a(geometry.antennas);
  for (int m = 0; m < geometry.antennas; ++m) {
    a[m] = std::polar(1.0, progression * m);
  }
  return a;
}

std::vector<double> beam_pattern(const Combiner& w,
                                 std::span<const double> angles,
                                 const ArrayGeometry& geometry) {
  if (angles.empty()) throw std::invalid_argument("angle list is empty");
  if (w.size() != geometry.antennas) {
    throw std::invalid_argument("combiner size does not match geometry");
  }
  std::vector<double> gains;
  gains.reserve(angles.size());
  for (double phi : angles) {
    gains.push_back(std::norm(w.inner(array_response(geometry, phi))));
  }
  return gains;
}

std::vector<double> angle_grid(double step_deg, double lo_deg, double hi_deg) {
  if (!(step_deg > 0.0) || hi_deg < lo_deg) {
    throw std::invalid_argument("invalid angle grid");
  }
  const auto n = static_cast<std::size_t>(
      std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = deg2rad(lo_deg + step_deg * static_cast<double>(i));
  }
  return grid;
}

SidelobeSearch find_sidelobe_peaks(std::span<const double> angles,
                                   std::span<const double> gains,
                                   std::size_t count) {
  if (angles.size() != gains.size() || gains.empty()) {
    throw std::invalid_argument("pattern angles and gains must match");
  }
  if (count < 1) throw std::invalid_argument("sidelobe count must be >= 1");

  const std::size_t n = gains.size();
  const auto peak_it = std::max_element(gains.begin(), gains.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - gains.begin());
  const double half = 0.5 * *peak_it;

  std::size_t lo = peak;
  while (lo > 0 && gains[lo - 1] >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < n && gains[hi + 1] >= half) ++hi;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= lo && i <= hi) continue;
    const bool rises = (i == 0) || gains[i] > gains[i - 1];
    const bool falls = (i + 1 == n) || gains[i] >= gains[i + 1];
    if (rises && falls && n > 1) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

  SidelobeSearch result;
  result.incomplete = candidates.size() < count;
  const std::size_t take = std::min(count, candidates.size());
  for (std::size_t k = 0; k < take; ++k) {
    result.angles.push_back(angles[candidates[k]]);
    result.gains.push_back(gains[candidates[k]]);
  }
  return result;
}

double hpbw(int antennas) {
  if (antennas < 2) throw std::invalid_argument("hpbw needs at least 2 antennas");
  return 1.78 / static_cast<double>(antennas);
}

double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }
double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }
double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

}  // namespace nullbeam
