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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nullbeam {

using cdouble = std::complex<double>;

/// Per-antenna phase settings in radians. Used both as the RL state and as
/// the (raw or quantized) action.
using PhaseVector = Eigen::VectorXd;

/// Phases realizable by an r-bit phase shifter: 2^r values uniformly spaced
/// over (-pi, pi], anchored so that both 0 and pi belong to the set.
class PhaseCodebook {
 public:
  static constexpr int kMaxBits = 16;

  /// Throws std::invalid_argument unless 1 <= bits <= 16.
  explicit PhaseCodebook(int bits);

  int bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return values_.size(); }
  double step() const noexcept { return step_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Nearest codebook phase by plain absolute difference; an exact tie goes
  /// to the smaller codebook value.
  double quantize(double theta) const noexcept;
  std::size_t index_of(double theta) const noexcept;
  bool contains(double theta) const noexcept;

 private:
  int bits_;
  double step_;
  std::vector<double> values_;
};

PhaseCodebook make_codebook(int bits);

PhaseVector quantize(const PhaseVector& phases, const PhaseCodebook& codebook);
bool is_quantized(const PhaseVector& phases, const PhaseCodebook& codebook);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double theta) noexcept;

/// Unit-norm analog combining vector with equal-magnitude entries.
class Combiner {
 public:
  /// w_m = exp(j theta_m) / sqrt(M).
  static Combiner from_phases(const PhaseVector& phases);

  /// Accepts arbitrary weights after checking |w_m| = 1/sqrt(M) to 1e-12.
  static Combiner from_weights(Eigen::VectorXcd weights);

  const Eigen::VectorXcd& weights() const noexcept { return w_; }
  Eigen::Index size() const noexcept { return w_.size(); }
  PhaseVector phases() const;

  /// w^H v
  cdouble inner(const Eigen::VectorXcd& v) const;

 private:
  explicit Combiner(Eigen::VectorXcd w) : w_(std::move(w)) {}
  Eigen::VectorXcd w_;
};

inline Combiner to_combiner(const PhaseVector& phases) {
  return Combiner::from_phases(phases);
}

struct ArrayGeometry {
  int antennas = 1;
  double spacing = 0.5;  ///< element spacing in wavelengths

  void validate() const;
};

/// Uniform linear array response, a_m = exp(j 2 pi d m sin(az) cos(el)).
Eigen::VectorXcd array_response(const ArrayGeometry& geometry, double azimuth,
                                double elevation = 0.0);

/// |w^H a(phi)|^2 for every angle in `angles` (radians).
std::vector<double> beam_pattern(const Combiner& w,
                                 std::span<const double> angles,
                                 const ArrayGeometry& geometry);

/// Evenly spaced grid over [lo_deg, hi_deg] with the given step, in radians.
std::vector<double> angle_grid(double step_deg, double lo_deg = -90.0,
                               double hi_deg = 90.0);

struct SidelobeSearch {
  std::vector<double> angles;  ///< strongest first
  std::vector<double> gains;
  bool incomplete = false;     ///< fewer sidelobes than requested
};

/// Finds the `count` strongest local maxima outside the main lobe. The main
/// lobe is the global peak plus the contiguous region down to half its power.
SidelobeSearch find_sidelobe_peaks(std::span<const double> angles,
                                   std::span<const double> gains,
                                   std::size_t count);

/// Half-power beamwidth of a half-wavelength ULA, 1.78/M rad.
double hpbw(int antennas);

double to_db(double linear) noexcept;
double from_db(double db) noexcept;
double deg2rad(double deg) noexcept;
double rad2deg(double rad) noexcept;

}  // namespace nullbeam
