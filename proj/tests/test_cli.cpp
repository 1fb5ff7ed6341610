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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nullbeam/cli.hpp"
#include "nullbeam/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nullbeam");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = nullbeam::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nullbeam_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::pair<double, double>> read_pattern(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string a, g;
    std::getline(ss, a, ',');
    std::getline(ss, g, ',');
    rows.emplace_back(std::stod(a), std::stod(g));
  }
  return rows;
}

double gain_near(const std::vector<std::pair<double, double>>& rows, double deg) {
  double best = 1e9, g = 0.0;
  for (const auto& [a, v] : rows) {
    if (std::abs(a - deg) < best) {
      best = std::abs(a - deg);
      g = v;
    }
  }
  return g;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("oracle"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const auto r = invoke({"run", "--frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MissingConfigFile) {
  const auto r = invoke({"run", "--config", "does_not_exist.json"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("file not found"), std::string::npos);
}

TEST(Cli, InvalidConfigNamesFields) {
  const fs::path dir = scratch_dir("badcfg");
  std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "scenario": {"antennas": "x"}})";
  const auto r = invoke({"run", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("antennas"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, OracleCountsBeams) {
  const auto r = invoke({"oracle", "--antennas", "4", "--bits", "2", "--interferers", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("evaluated 256 beams"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = NULLBEAM_CLI_PATH;
  EXPECT_EQ(std::system((bin + " --help > /dev/null").c_str()), 0);
  const int rc = std::system((bin + " run --frobnicate > /dev/null 2>&1").c_str());
  ASSERT_TRUE(WIFEXITED(rc));
  EXPECT_EQ(WEXITSTATUS(rc), 2);
}

TEST(Cli, AwareBeamNullsInterferers) {
  const fs::path dir = scratch_dir("run");
  const fs::path cfg = fs::path(NULLBEAM_CONFIG_DIR) / "null_shaping_m8.json";
  const auto r = invoke({"run", "--config", cfg.string(), "--seed", "1", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path seed_dir = dir / "null_shaping_m8" / "seed_1";
  const auto beam = seed_dir / "aware_beam.json";
  ASSERT_TRUE(fs::exists(beam));

  const auto csv = dir / "pattern.csv";
  const auto p = invoke({"pattern", "--beam", beam.string(), "--config", cfg.string(), "--out",
                         csv.string(), "--grid", "0.05"});
  ASSERT_EQ(p.code, 0) << p.err;
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "angle_deg,gain_linear,gain_db");

  const auto rows = read_pattern(csv);
  const auto s = nullbeam::io::read_json_file(seed_dir / "scenario.json");
  const auto sc = nullbeam::io::scenario_from_json(s);
  const double target = gain_near(rows, sc.target.paths()[0].azimuth * 180.0 / M_PI);
  for (const auto& h : sc.interferers) {
    const double g = gain_near(rows, h.paths()[0].azimuth * 180.0 / M_PI);
    EXPECT_GE(10.0 * std::log10(target / g), 20.0);
  }
  fs::remove_all(dir);
}
