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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nullbeam/channel.hpp"
#include "nullbeam/errors.hpp"
#include "nullbeam/io.hpp"

using namespace nullbeam;
using std::numbers::pi;

TEST(LosChannel, Broadside) {
  const auto h = los_channel({2, 0.5}, 1.0, 0.0).vector();
  EXPECT_NEAR(std::abs(h[0] - cdouble(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h[1] - cdouble(1, 0)), 0.0, 1e-15);
}

TEST(LosChannel, ComplexGainScales) {
  const auto h = los_channel({2, 0.5}, cdouble(0, 2), 0.0).vector();
  EXPECT_NEAR(std::abs(h[0] - cdouble(0, 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h[1] - cdouble(0, 2)), 0.0, 1e-15);
}

TEST(MultipathChannel, EmptyRejected) {
  EXPECT_THROW(multipath_channel({4, 0.5}, {}), std::invalid_argument);
}

TEST(MultipathChannel, OppositePathsCancel) {
  const cdouble a(0.3, -0.7);
  const auto h = multipath_channel({6, 0.5}, {{a, 0.4, 0.0}, {-a, 0.4, 0.0}}).vector();
  EXPECT_NEAR(h.norm(), 0.0, 1e-15);
}

TEST(MultipathChannel, SinglePathIsLos) {
  const ArrayGeometry g{5, 0.5};
  const cdouble a(0.2, 0.9);
  const auto h1 = multipath_channel(g, {{a, -0.3, 0.0}}).vector();
  const auto h2 = los_channel(g, a, -0.3).vector();
  EXPECT_EQ(h1, h2);
}

TEST(MultipathChannel, MatchesElementwiseSum) {
  const ArrayGeometry g{4, 0.5};
  const double az2 = pi / 6;
  const auto h = multipath_channel(g, {{1.0, 0.0, 0.0}, {0.5, az2, 0.0}}).vector();
  for (int m = 0; m < 4; ++m) {
    const cdouble expect = 1.0 + 0.5 * std::exp(cdouble(0, pi * m * std::sin(az2)));
    EXPECT_NEAR(std::abs(h[m] - expect), 0.0, 1e-12);
  }
}

TEST(MultipathChannel, LinearInGains) {
  const ArrayGeometry g{8, 0.5};
  const cdouble s(1.5, -0.25);
  std::vector<PathComponent> paths{{{0.3, 0.1}, 0.2, 0.0}, {{-0.4, 0.8}, -0.9, 0.0}};
  auto scaled = paths;
  for (auto& p : scaled) p.gain *= s;
  const auto h = multipath_channel(g, paths).vector();
  const auto hs = multipath_channel(g, scaled).vector();
  EXPECT_NEAR((hs - s * h).norm(), 0.0, 1e-12);
}

TEST(BuildScenario, NoInterferers) {
  ScenarioConfig c;
  c.interferer_count = 0;
  EXPECT_TRUE(build_scenario(c).interferers.empty());
}

TEST(BuildScenario, Deterministic) {
  ScenarioConfig c;
  c.target_azimuth_deg.reset();
  c.placement = Placement::Explicit;
  c.interferer_count = 2;
  c.interferers = {{20.0, 0.0}, {-35.0, 3.0}};
  c.seed = 42;
  const auto a = build_scenario(c);
  const auto b = build_scenario(c);
  EXPECT_EQ(a.target.vector(), b.target.vector());
  ASSERT_EQ(a.interferers.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(a.interferers[k].vector(), b.interferers[k].vector());
  EXPECT_NEAR(std::norm(a.interferers[1].paths()[0].gain), from_db(3.0), 1e-12);
}

TEST(BuildScenario, ZeroNoiseRejected) {
  ScenarioConfig c;
  c.noise_power = 0.0;
  try {
    build_scenario(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.fields().size(), 1u);
    EXPECT_EQ(e.fields()[0], "noise_power");
  }
}

TEST(BuildScenario, ListsEveryBadField) {
  ScenarioConfig c;
  c.antennas = 0;
  c.phase_bits = 0;
  c.interferer_count = -1;
  try {
    build_scenario(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.fields().size(), 3u);
  }
}

TEST(BuildScenario, NoiseFromReferenceSnr) {
  ScenarioConfig c;
  c.antennas = 16;
  c.snr_db = 20.0;
  const auto s = build_scenario(c);
  // Matched 8-element beam: 8 |alpha|^2 P_x / sigma^2 = 100.
  EXPECT_NEAR(8.0 * s.transmit_power / s.noise_power, 100.0, 1e-9);
  EXPECT_NEAR(std::abs(s.target.paths()[0].gain), 1.0, 1e-15);
}

TEST(BuildScenario, ExplicitNoiseOverrides) {
  ScenarioConfig c;
  c.noise_power = 0.25;
  EXPECT_DOUBLE_EQ(build_scenario(c).noise_power, 0.25);
}

TEST(BuildScenario, RandomTargetWithinRange) {
  ScenarioConfig c;
  c.target_azimuth_deg.reset();
  c.target_azimuth_range_deg = 30.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    c.seed = seed;
    EXPECT_LE(std::abs(rad2deg(target_azimuth(c))), 30.0);
  }
}

TEST(Scenario, JsonRoundTripIsExact) {
  ScenarioConfig c;
  c.antennas = 12;
  c.target_azimuth_deg = 17.3;
  c.placement = Placement::Explicit;
  c.interferer_count = 1;
  c.interferers = {{-41.7, -2.0}};
  c.seed = 9;
  const auto s = build_scenario(c);
  const auto back = io::scenario_from_json(io::to_json(s));
  EXPECT_EQ(back.target.vector(), s.target.vector());
  ASSERT_EQ(back.interferers.size(), 1u);
  EXPECT_EQ(back.interferers[0].vector(), s.interferers[0].vector());
  EXPECT_EQ(back.noise_power, s.noise_power);
  EXPECT_EQ(io::fingerprint(back), io::fingerprint(s));
}
