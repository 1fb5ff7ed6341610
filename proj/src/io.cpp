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

#include "nullbeam/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam::io {

double cap_db(double db) noexcept {
  if (std::isnan(db)) return db;
  return std::clamp(db, -kDbCap, kDbCap);
}

namespace {

json path_to_json(const PathComponent& p) {
  return {{"gain_re", p.gain.real()},
          {"gain_im", p.gain.imag()},
          {"azimuth_rad", p.azimuth},
          {"elevation_rad", p.elevation},
          {"azimuth_deg", rad2deg(p.azimuth)}};
}

json channel_to_json(const Channel& c) {
  json paths = json::array();
  for (const auto& p : c.paths()) paths.push_back(path_to_json(p));
  return {{"paths", paths}};
}

Channel channel_from_json(const ArrayGeometry& g, const json& j) {
  std::vector<PathComponent> paths;
  for (const auto& p : j.at("paths")) {
    paths.push_back({cdouble(p.at("gain_re").get<double>(), p.at("gain_im").get<double>()),
                     p.at("azimuth_rad").get<double>(), p.value("elevation_rad", 0.0)});
  }
  return Channel(g, std::move(paths));
}

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_db(double db) { return fmt(cap_db(db)); }

}  // namespace

json to_json(const Scenario& s) {
  json interferers = json::array();
  for (const auto& h : s.interferers) interferers.push_back(channel_to_json(h));
  return {{"antennas", s.geometry.antennas},
          {"element_spacing", s.geometry.spacing},
          {"phase_bits", s.codebook.bits()},
          {"transmit_power", s.transmit_power},
          {"noise_power", s.noise_power},
          {"measurement_noise_db", s.measurement_noise_db},
          {"seed", s.seed},
          {"target", channel_to_json(s.target)},
          {"interferers", interferers}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.geometry = ArrayGeometry{j.at("antennas").get<int>(), j.at("element_spacing").get<double>()};
  s.geometry.validate();
  s.codebook = PhaseCodebook(j.at("phase_bits").get<int>());
  s.transmit_power = j.at("transmit_power").get<double>();
  s.noise_power = j.at("noise_power").get<double>();
  s.measurement_noise_db = j.value("measurement_noise_db", 0.0);
  s.seed = j.value("seed", std::uint64_t{0});
  s.target = channel_from_json(s.geometry, j.at("target"));
  for (const auto& h : j.at("interferers")) s.interferers.push_back(channel_from_json(s.geometry, h));
  s.validate();
  return s;
}

std::string fingerprint(const Scenario& s) {
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(s).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const Metrics& m) {
  json sir = json::array();
  for (double v : m.sir_db) sir.push_back(cap_db(v));
  return {{"sir_db", sir},
          {"inr_db", cap_db(m.inr_db)},
          {"snr_db", cap_db(m.snr_db)},
          {"sinr_db", cap_db(m.sinr_db)},
          {"sinr", m.sinr},
          {"signal_gain", m.signal_gain},
          {"interferer_gain", m.interferer_gain},
          {"rate", m.rate}};
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.sir_db = j.at("sir_db").get<std::vector<double>>();
  m.inr_db = j.at("inr_db").get<double>();
  m.snr_db = j.at("snr_db").get<double>();
  m.sinr_db = j.at("sinr_db").get<double>();
  m.sinr = j.at("sinr").get<double>();
  m.signal_gain = j.at("signal_gain").get<double>();
  m.interferer_gain = j.at("interferer_gain").get<std::vector<double>>();
  m.rate = j.at("rate").get<double>();
  return m;
}

json to_json(const BeamRecord& b) {
  std::vector<double> phases(b.phases.begin(), b.phases.end());
  json j = {{"phases_rad", phases}, {"bits", b.bits}};
  if (b.metrics) j["metrics"] = to_json(*b.metrics);
  if (!b.scenario_fingerprint.empty()) j["scenario_fingerprint"] = b.scenario_fingerprint;
  return j;
}

BeamRecord beam_from_json(const json& j) {
  BeamRecord b;
  const auto phases = j.at("phases_rad").get<std::vector<double>>();
  if (phases.empty()) throw ConfigError("beam has no phases", {"phases_rad"});
  b.phases = Eigen::Map<const PhaseVector>(phases.data(), static_cast<Eigen::Index>(phases.size()));
  b.bits = j.at("bits").get<int>();
  if (j.contains("metrics")) b.metrics = metrics_from_json(j.at("metrics"));
  b.scenario_fingerprint = j.value("scenario_fingerprint", std::string{});
  return b;
}

void write_trajectory_csv(std::ostream& out, std::span<const IterationRecord> log,
                          std::size_t interferers) {
  out << "iter,sinr_db";
  for (std::size_t k = 1; k <= interferers; ++k) out << ",sir_db_" << k;
  out << ",inr_db,signal_gain_linear,reward,explore_sigma,critic_loss,actor_objective,"
         "best_sinr_db,source\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : log) {
    out << r.iteration << ',' << fmt_db(to_db(r.sinr));
    for (std::size_t k = 0; k < interferers; ++k) {
      out << ',' << (r.truth && k < r.truth->sir_db.size() ? fmt_db(r.truth->sir_db[k]) : "");
    }
    out << ',' << (r.truth ? fmt_db(r.truth->inr_db) : "") << ','
        << (r.truth ? fmt(r.truth->signal_gain) : "") << ',' << r.reward << ','
        << fmt(r.explore_sigma) << ',' << fmt(r.critic_loss.value_or(nan)) << ','
        << fmt(r.actor_objective.value_or(nan)) << ',' << fmt_db(to_db(r.best_sinr)) << ','
        << (r.real ? "real" : "virtual") << '\n';
  }
}

void write_pattern_csv(std::ostream& out, std::span<const double> angles,
                       std::span<const double> gains) {
  if (angles.size() != gains.size()) throw std::invalid_argument("angle/gain length mismatch");
  out << "angle_deg,gain_linear,gain_db\n";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    out << fmt(rad2deg(angles[i])) << ',' << fmt(gains[i]) << ',' << fmt_db(to_db(gains[i]))
        << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const SurrogateDataset& data) {
  const int m = data.antennas();
  for (int i = 1; i <= m; ++i) out << "re_w" << i << ',';
  for (int i = 1; i <= m; ++i) out << "im_w" << i << ',';
  out << "power_linear\n";
  for (const auto& s : data.samples()) {
    for (int i = 0; i < m; ++i) out << fmt(s.weights[i].real()) << ',';
    for (int i = 0; i < m; ++i) out << fmt(s.weights[i].imag()) << ',';
    out << fmt(s.power) << '\n';
  }
}

SurrogateDataset read_dataset_csv(std::istream& in, PowerKind kind) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset csv is empty");
  const auto columns = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 3 || columns % 2 == 0) throw std::invalid_argument("bad dataset csv header");
  const int m = (columns - 1) / 2;
  SurrogateDataset data(kind, m);
  std::vector<double> row(static_cast<std::size_t>(columns));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= columns) break;
      row[static_cast<std::size_t>(c++)] = std::stod(cell);
    }
    if (c != columns) {
      throw std::invalid_argument("dataset csv line " + std::to_string(lineno) + " is short");
    }
    Eigen::VectorXcd w(m);
    for (int i = 0; i < m; ++i) w[i] = cdouble(row[static_cast<std::size_t>(i)],
                                               row[static_cast<std::size_t>(m + i)]);
    data.append(Combiner::from_weights(std::move(w)), row.back());
  }
  return data;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + ": file not found");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nullbeam::io
