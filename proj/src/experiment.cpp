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

#include "nullbeam/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam {

using io::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class FieldReader {
 public:
  FieldReader(const json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(path_.empty() ? "<root>" : path_);
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.is_object()) return;
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      errors_.push_back(path_ + key);
    }
  }

  template <class T>
  void get_optional(const char* key, std::optional<T>& out) {
    if (!j_.is_object()) return;
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      errors_.push_back(path_ + key);
    }
  }

  /// Sub-object reader; the key counts as seen.
  const json* child(const char* key) {
    if (!j_.is_object()) return nullptr;
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) errors_.push_back(path_ + it.key() + " (unknown)");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

std::string placement_name(Placement p) {
  return p == Placement::Sidelobes ? "sidelobes" : "explicit";
}

json training_to_json(const SurrogateTraining& t) {
  return {{"learning_rate", t.learning_rate}, {"milestones", t.milestones},
          {"decay_factor", t.decay_factor},   {"batch_size", t.batch_size},
          {"epochs", t.epochs}};
}

void read_training(const json* j, const std::string& path, SurrogateTraining& t,
                   std::vector<std::string>& errors) {
  if (!j) return;
  FieldReader r(*j, path, errors);
  r.get("learning_rate", t.learning_rate);
  r.get("milestones", t.milestones);
  r.get("decay_factor", t.decay_factor);
  r.get("batch_size", t.batch_size);
  r.get("epochs", t.epochs);
  r.finish();
}

void read_scenario(const json* j, ScenarioConfig& s, std::vector<std::string>& errors) {
  if (!j) return;
  FieldReader r(*j, "scenario.", errors);
  r.get("antennas", s.antennas);
  r.get("element_spacing", s.element_spacing);
  r.get("phase_bits", s.phase_bits);
  r.get_optional("target_azimuth_deg", s.target_azimuth_deg);
  r.get("target_azimuth_range_deg", s.target_azimuth_range_deg);
  r.get("snr_db", s.snr_db);
  r.get("snr_reference_antennas", s.snr_reference_antennas);
  r.get("transmit_power", s.transmit_power);
  r.get_optional("noise_power", s.noise_power);
  r.get("interferer_count", s.interferer_count);
  std::string placement = placement_name(s.placement);
  r.get("placement", placement);
  if (placement == "sidelobes") {
    s.placement = Placement::Sidelobes;
  } else if (placement == "explicit") {
    s.placement = Placement::Explicit;
  } else {
    errors.emplace_back("scenario.placement");
  }
  if (const json* list = r.child("interferers")) {
    if (!list->is_array()) {
      errors.emplace_back("scenario.interferers");
    } else {
      s.interferers.clear();
      for (std::size_t k = 0; k < list->size(); ++k) {
        InterfererSpec spec;
        FieldReader ir((*list)[k], "scenario.interferers[" + std::to_string(k) + "].", errors);
        ir.get("azimuth_deg", spec.azimuth_deg);
        ir.get("relative_gain_db", spec.relative_gain_db);
        ir.finish();
        s.interferers.push_back(spec);
      }
    }
  }
  r.get("interferer_relative_gain_db", s.interferer_relative_gain_db);
  r.get("measurement_noise_db", s.measurement_noise_db);
  r.finish();
}

void read_agent(const json* j, ActorCriticConfig& a, std::vector<std::string>& errors) {
  if (!j) return;
  FieldReader r(*j, "agent.", errors);
  r.get("actor_hidden_factor", a.actor_hidden_factor);
  r.get("critic_hidden_factor", a.critic_hidden_factor);
  r.get("explore_sigma", a.explore_sigma);
  r.get("explore_decay", a.explore_decay);
  r.get("explore_floor", a.explore_floor);
  r.get("replay_capacity", a.replay_capacity);
  r.get("batch_size", a.batch_size);
  r.get("gamma", a.gamma);
  r.get("tau", a.tau);
  r.get("actor_lr", a.actor_lr);
  r.get("critic_lr", a.critic_lr);
  r.finish();
}

void read_surrogate(const json* j, SurrogateConfig& s, std::vector<std::string>& errors) {
  if (!j) return;
  FieldReader r(*j, "surrogate.", errors);
  std::string mode = to_string(s.mode);
  r.get("mode", mode);
  try {
    s.mode = surrogate_mode_from_string(mode);
  } catch (const std::invalid_argument&) {
    errors.emplace_back("surrogate.mode");
  }
  r.get("interference_rank", s.interference_rank);
  r.get("signal_rank", s.signal_rank);
  r.get("model_offset", s.model_offset);
  r.get("fc_hidden", s.fc_hidden);
  std::string encoding = to_string(s.fc_encoding);
  r.get("fc_encoding", encoding);
  try {
    s.fc_encoding = fc_encoding_from_string(encoding);
  } catch (const std::invalid_argument&) {
    errors.emplace_back("surrogate.fc_encoding");
  }
  read_training(r.child("model_training"), "surrogate.model_training.", s.model_training, errors);
  read_training(r.child("fc_training"), "surrogate.fc_training.", s.fc_training, errors);
  if (const json* sw = r.child("switching")) {
    FieldReader w(*sw, "surrogate.switching.", errors);
    w.get("real_steps_per_round", s.switching.real_steps_per_round);
    w.get("rounds", s.switching.rounds);
    w.get("nmse_threshold", s.switching.nmse_threshold);
    w.get("stagnation_window", s.switching.stagnation_window);
    w.finish();
  }
  r.finish();
}

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  const auto collect = [&bad](const std::string& prefix, const auto& check) {
    try {
      check();
    } catch (const ConfigError& e) {
      for (const auto& f : e.fields()) bad.push_back(prefix + f);
    }
  };
  collect("scenario.", [&] { scenario.validate(); });
  ActorCriticConfig a = agent;
  a.antennas = std::max(scenario.antennas, 1);
  collect("agent.", [&] { a.validate(); });
  if (unaware_iterations < 1) bad.emplace_back("unaware_iterations");
  if (aware_iterations < 1) bad.emplace_back("aware_iterations");
  if (seeds.empty()) bad.emplace_back("seeds");
  if (!(angle_grid_deg > 0.0 && angle_grid_deg <= 10.0)) bad.emplace_back("angle_grid_deg");
  if (surrogate.mode != SurrogateMode::None) {
    if (surrogate.interference_rank < 0) bad.emplace_back("surrogate.interference_rank");
    if (surrogate.signal_rank < 1) bad.emplace_back("surrogate.signal_rank");
    if (surrogate.fc_hidden < 1) bad.emplace_back("surrogate.fc_hidden");
    for (const auto* t : {&surrogate.model_training, &surrogate.fc_training}) {
      if (!(t->learning_rate > 0.0) || t->batch_size < 1 || t->epochs < 1) {
        bad.emplace_back(t == &surrogate.model_training ? "surrogate.model_training"
                                                        : "surrogate.fc_training");
      }
    }
    SwitchConfig sw = surrogate.switching;
    sw.total_iterations = aware_iterations;
    try {
      sw.validate();
    } catch (const ConfigError& e) {
      for (const auto& f : e.fields()) bad.push_back("surrogate.switching." + f);
    }
  }
  if (!bad.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(msg, std::move(bad));
  }
}

json to_json(const ExperimentConfig& c) {
  const auto& s = c.scenario;
  json interferers = json::array();
  for (const auto& i : s.interferers) {
    interferers.push_back({{"azimuth_deg", i.azimuth_deg}, {"relative_gain_db", i.relative_gain_db}});
  }
  json scenario = {
      {"antennas", s.antennas},
      {"element_spacing", s.element_spacing},
      {"phase_bits", s.phase_bits},
      {"target_azimuth_deg", s.target_azimuth_deg ? json(*s.target_azimuth_deg) : json(nullptr)},
      {"target_azimuth_range_deg", s.target_azimuth_range_deg},
      {"snr_db", s.snr_db},
      {"snr_reference_antennas", s.snr_reference_antennas},
      {"transmit_power", s.transmit_power},
      {"noise_power", s.noise_power ? json(*s.noise_power) : json(nullptr)},
      {"interferer_count", s.interferer_count},
      {"placement", placement_name(s.placement)},
      {"interferers", interferers},
      {"interferer_relative_gain_db", s.interferer_relative_gain_db},
      {"measurement_noise_db", s.measurement_noise_db}};
  const auto& a = c.agent;
  json agent = {{"actor_hidden_factor", a.actor_hidden_factor},
                {"critic_hidden_factor", a.critic_hidden_factor},
                {"explore_sigma", a.explore_sigma},
                {"explore_decay", a.explore_decay},
                {"explore_floor", a.explore_floor},
                {"replay_capacity", a.replay_capacity},
                {"batch_size", a.batch_size},
                {"gamma", a.gamma},
                {"tau", a.tau},
                {"actor_lr", a.actor_lr},
                {"critic_lr", a.critic_lr}};
  const auto& g = c.surrogate;
  json surrogate = {{"mode", to_string(g.mode)},
                    {"interference_rank", g.interference_rank},
                    {"signal_rank", g.signal_rank},
                    {"model_offset", g.model_offset},
                    {"fc_hidden", g.fc_hidden},
                    {"fc_encoding", to_string(g.fc_encoding)},
                    {"model_training", training_to_json(g.model_training)},
                    {"fc_training", training_to_json(g.fc_training)},
                    {"switching",
                     {{"real_steps_per_round", g.switching.real_steps_per_round},
                      {"rounds", g.switching.rounds},
                      {"nmse_threshold", g.switching.nmse_threshold},
                      {"stagnation_window", g.switching.stagnation_window}}}};
  return {{"schema_version", kSchemaVersion},
          {"name", c.name},
          {"scenario", scenario},
          {"agent", agent},
          {"surrogate", surrogate},
          {"unaware_iterations", c.unaware_iterations},
          {"aware_iterations", c.aware_iterations},
          {"seeds", c.seeds},
          {"output_dir", c.output_dir.string()},
          {"angle_grid_deg", c.angle_grid_deg}};
}

ExperimentConfig config_from_json(const json& j) {
  std::vector<std::string> errors;
  ExperimentConfig c;
  FieldReader r(j, "", errors);
  int version = 0;
  r.get("schema_version", version);
  if (version != kSchemaVersion) errors.emplace_back("schema_version");
  r.get("name", c.name);
  read_scenario(r.child("scenario"), c.scenario, errors);
  read_agent(r.child("agent"), c.agent, errors);
  read_surrogate(r.child("surrogate"), c.surrogate, errors);
  r.get("unaware_iterations", c.unaware_iterations);
  r.get("aware_iterations", c.aware_iterations);
  r.get("seeds", c.seeds);
  std::string out = c.output_dir.string();
  r.get("output_dir", out);
  c.output_dir = out;
  r.get("angle_grid_deg", c.angle_grid_deg);
  r.finish();
  if (!errors.empty()) {
    std::string msg = "invalid config fields:";
    for (const auto& e : errors) msg += " " + e;
    throw ConfigError(msg, std::move(errors));
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(io::read_json_file(path));
}

// ---------------------------------------------------------------------------

BeamReport make_report(const Scenario& s, const PhaseVector& phases) {
  return {phases, full_metrics(s, Combiner::from_phases(phases)), io::fingerprint(s)};
}

io::BeamRecord to_record(const BeamReport& r, int bits) {
  return {r.phases, bits, r.metrics, r.scenario_fingerprint};
}

Summary summarize(const BeamReport& unaware, const BeamReport& aware) {
  if (unaware.scenario_fingerprint != aware.scenario_fingerprint ||
      unaware.metrics.sir_db.size() != aware.metrics.sir_db.size()) {
    throw std::invalid_argument("beams were evaluated on different scenarios");
  }
  const Metrics& a = unaware.metrics;
  const Metrics& b = aware.metrics;
  Summary s;
  s.sir_before_db = a.sir_db;
  s.sir_after_db = b.sir_db;
  for (std::size_t k = 0; k < a.sir_db.size(); ++k) {
    // Two perfect nulls compare as equal rather than inf - inf.
    const double d = a.sir_db[k] == b.sir_db[k] ? 0.0 : b.sir_db[k] - a.sir_db[k];
    s.sir_gain_db.push_back(d);
  }
  s.inr_before_db = a.inr_db;
  s.inr_after_db = b.inr_db;
  s.inr_reduction_db = a.inr_db == b.inr_db ? 0.0 : a.inr_db - b.inr_db;
  s.gain_before = a.signal_gain;
  s.gain_after = b.signal_gain;
  s.gain_loss_db = a.signal_gain == b.signal_gain ? 0.0 : to_db(a.signal_gain / b.signal_gain);
  s.sinr_before_db = a.sinr_db;
  s.sinr_after_db = b.sinr_db;
  s.rate_before = a.rate;
  s.rate_after = b.rate;
  return s;
}

json to_json(const Summary& s) {
  auto capped = [](const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(io::cap_db(x));
    return out;
  };
  return {{"sir_before_db", capped(s.sir_before_db)},
          {"sir_after_db", capped(s.sir_after_db)},
          {"sir_gain_db", capped(s.sir_gain_db)},
          {"inr_before_db", io::cap_db(s.inr_before_db)},
          {"inr_after_db", io::cap_db(s.inr_after_db)},
          {"inr_reduction_db", io::cap_db(s.inr_reduction_db)},
          {"gain_before", s.gain_before},
          {"gain_after", s.gain_after},
          {"gain_loss_db", io::cap_db(s.gain_loss_db)},
          {"sinr_before_db", io::cap_db(s.sinr_before_db)},
          {"sinr_after_db", io::cap_db(s.sinr_after_db)},
          {"rate_before", s.rate_before},
          {"rate_after", s.rate_after}};
}

Summary summary_from_json(const json& j) {
  Summary s;
  s.sir_before_db = j.at("sir_before_db").get<std::vector<double>>();
  s.sir_after_db = j.at("sir_after_db").get<std::vector<double>>();
  s.sir_gain_db = j.at("sir_gain_db").get<std::vector<double>>();
  s.inr_before_db = j.at("inr_before_db").get<double>();
  s.inr_after_db = j.at("inr_after_db").get<double>();
  s.inr_reduction_db = j.at("inr_reduction_db").get<double>();
  s.gain_before = j.at("gain_before").get<double>();
  s.gain_after = j.at("gain_after").get<double>();
  s.gain_loss_db = j.at("gain_loss_db").get<double>();
  s.sinr_before_db = j.at("sinr_before_db").get<double>();
  s.sinr_after_db = j.at("sinr_after_db").get<double>();
  s.rate_before = j.at("rate_before").get<double>();
  s.rate_after = j.at("rate_after").get<double>();
  return s;
}

// ---------------------------------------------------------------------------

namespace {

ActorCriticConfig agent_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  ActorCriticConfig a = cfg.agent;
  a.antennas = cfg.scenario.antennas;
  a.seed = seed;
  return a;
}

std::vector<double> pattern_of(const Scenario& s, const PhaseVector& phases,
                               const std::vector<double>& angles) {
  return beam_pattern(Combiner::from_phases(phases), angles, s.geometry);
}

}  // namespace

RunArtifact run_pipeline(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  RunArtifact art;
  art.seed = seed;
  art.config = cfg;
  art.config.seeds = {seed};
  std::string stage = "config";
  try {
    cfg.validate();
    ScenarioConfig sc = cfg.scenario;
    sc.seed = seed;

    stage = "scenario";
    Scenario full = build_scenario(sc);
    Scenario quiet = full;
    quiet.interferers.clear();
    art.scenario = quiet;

    // Unaware beam: the same learner with the interferers silent.
    stage = "unaware";
    {
      ActualEnvironment env(quiet, seed * 2 + 1);
      LearnResult r = learn(env, agent_for(cfg, seed * 2 + 1), cfg.unaware_iterations, &quiet);
      art.unaware_log = std::move(r.log);
      art.unaware = make_report(quiet, r.best_state);
    }

    stage = "pattern";
    art.angles = angle_grid(cfg.angle_grid_deg);
    art.unaware_pattern = pattern_of(quiet, art.unaware->phases, art.angles);

    stage = "placement";
    const auto k = static_cast<std::size_t>(sc.interferer_count);
    if (sc.placement == Placement::Sidelobes && k > 0) {
      art.sidelobes = find_sidelobe_peaks(art.angles, art.unaware_pattern, k);
      if (art.sidelobes.incomplete) {
        throw std::runtime_error("unaware pattern has fewer than " + std::to_string(k) +
                                 " sidelobes");
      }
      for (double az : art.sidelobes.angles) {
        add_los_interferer(full, az, sc.interferer_relative_gain_db, seed);
      }
    }
    art.scenario = full;
    art.unaware = make_report(full, art.unaware->phases);

    stage = "aware";
    if (full.interferers.empty()) {
      // Nothing to null: the aware problem is the unaware one.
      art.aware_log = art.unaware_log;
      art.aware = art.unaware;
    } else {
      ActualEnvironment env(full, seed * 2 + 2);
      SurrogateConfig sg = cfg.surrogate;
      sg.switching.total_iterations = cfg.aware_iterations;
      sg.seed = seed;
      AssistedResult r = run_assisted_learning(env, agent_for(cfg, seed * 2 + 2), sg, &full);
      art.aware_log = std::move(r.log);
      art.rounds = std::move(r.rounds);
      art.aware_measurements = r.real_measurements;
      art.aware = make_report(full, r.best_state);
    }
    art.aware_pattern = pattern_of(full, art.aware->phases, art.angles);

    stage = "summary";
    art.summary = summarize(*art.unaware, *art.aware);
  } catch (const std::exception& e) {
    art.failed_stage = stage;
    art.error = e.what();
  }
  art.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return art;
}

std::filesystem::path run_directory(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.output_dir / cfg.name / ("seed_" + std::to_string(seed));
}

void write_artifact(const RunArtifact& a, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_json_file(dir / "config.json", to_json(a.config));
  io::write_json_file(dir / "scenario.json", io::to_json(a.scenario));
  const int bits = a.config.scenario.phase_bits;
  const std::size_t k = a.scenario.num_interferers();
  auto write_csv = [&](const char* name, auto&& fn) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    fn(out);
  };
  if (a.unaware) {
    io::write_json_file(dir / "unaware_beam.json", io::to_json(to_record(*a.unaware, bits)));
    write_csv("unaware_trajectory.csv",
              [&](std::ostream& o) { io::write_trajectory_csv(o, a.unaware_log, 0); });
  }
  if (!a.unaware_pattern.empty()) {
    write_csv("unaware_pattern.csv",
              [&](std::ostream& o) { io::write_pattern_csv(o, a.angles, a.unaware_pattern); });
  }
  if (a.aware) {
    io::write_json_file(dir / "aware_beam.json", io::to_json(to_record(*a.aware, bits)));
    write_csv("aware_trajectory.csv",
              [&](std::ostream& o) { io::write_trajectory_csv(o, a.aware_log, k); });
  }
  if (!a.aware_pattern.empty()) {
    write_csv("aware_pattern.csv",
              [&](std::ostream& o) { io::write_pattern_csv(o, a.angles, a.aware_pattern); });
  }
  if (a.summary) {
    json s = to_json(*a.summary);
    s["seed"] = a.seed;
    s["interferer_azimuth_deg"] = json::array();
    for (const auto& h : a.scenario.interferers) {
      s["interferer_azimuth_deg"].push_back(rad2deg(h.paths().front().azimuth));
    }
    s["target_azimuth_deg"] = rad2deg(a.scenario.target.paths().front().azimuth);
    s["aware_real_measurements"] = a.aware_measurements;
    s["runtime_seconds"] = a.runtime_seconds;
    io::write_json_file(dir / "summary.json", s);
  }
  if (!a.ok()) {
    io::write_json_file(dir / "FAILED.json", {{"stage", a.failed_stage}, {"error", a.error}});
  } else {
    std::filesystem::remove(dir / "FAILED.json");
  }
}

Scenario standalone_scenario(const ScenarioConfig& cfg) {
  Scenario s = build_scenario(cfg);
  if (cfg.placement == Placement::Sidelobes && cfg.interferer_count > 0) {
    const double az = s.target.paths().front().azimuth;
    PhaseVector steer(cfg.antennas);
    for (int m = 0; m < cfg.antennas; ++m) {
      steer[m] = wrap_phase(2.0 * std::numbers::pi * cfg.element_spacing * m * std::sin(az));
    }
    steer = quantize(steer, s.codebook);
    const auto angles = angle_grid(0.1);
    const auto gains = beam_pattern(Combiner::from_phases(steer), angles, s.geometry);
    const auto lobes = find_sidelobe_peaks(angles, gains, static_cast<std::size_t>(cfg.interferer_count));
    if (lobes.incomplete) throw std::runtime_error("steering beam has too few sidelobes");
    for (double a : lobes.angles) add_los_interferer(s, a, cfg.interferer_relative_gain_db, cfg.seed);
  }
  return s;
}

OracleResult exhaustive_search(const Scenario& s, std::uint64_t max_beams) {
  const int m = s.geometry.antennas;
  const auto q = static_cast<std::uint64_t>(s.codebook.size());
  std::uint64_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > max_beams / q) throw std::invalid_argument("search space too large");
    total *= q;
  }
  OracleResult best;
  best.sinr = -1.0;
  std::vector<std::size_t> digits(static_cast<std::size_t>(m), 0);
  PhaseVector phases(m);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::uint64_t x = n;
    for (int i = 0; i < m; ++i) {
      phases[i] = s.codebook.values()[x % q];
      x /= q;
    }
    const double v = analytic_sinr(s, Combiner::from_phases(phases));
    if (v > best.sinr) {
      best.sinr = v;
      best.phases = phases;
    }
  }
  best.evaluated = total;
  return best;
}

// ---------------------------------------------------------------------------

double SweepPoint::mean_nmse() const {
  if (nmse.empty()) return 0.0;
  double s = 0.0;
  for (double v : nmse) s += v;
  return s / static_cast<double>(nmse.size());
}

SurrogateDataset sample_interference_dataset(ActualEnvironment& env, std::size_t n,
                                             std::uint64_t seed) {
  const auto& cb = env.codebook();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cb.size() - 1);
  SurrogateDataset d(PowerKind::Interference, env.antennas());
  PhaseVector p(env.antennas());
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : p) v = cb.values()[pick(rng)];
    const Combiner w = Combiner::from_phases(p);
    d.append(w, env.measure_interference_plus_noise(w));
  }
  return d;
}

std::vector<SweepPoint> sweep_surrogate(const ExperimentConfig& cfg, const SweepSettings& sweep,
                                        std::uint64_t seed) {
  ScenarioConfig sc = cfg.scenario;
  sc.seed = seed;
  const Scenario s = standalone_scenario(sc);
  const int k = static_cast<int>(s.num_interferers());
  std::vector<SweepPoint> out;
  for (SurrogateMode arch : sweep.architectures) {
    for (std::size_t n : sweep.sizes) {
      SweepPoint pt;
      pt.samples = n;
      pt.architecture = arch;
      for (int d = 0; d < sweep.draws; ++d) {
        const std::uint64_t draw_seed = seed * 7919 + static_cast<std::uint64_t>(d);
        ActualEnvironment env(s, draw_seed);
        const SurrogateDataset train = sample_interference_dataset(env, n, draw_seed * 2 + 1);
        const SurrogateDataset test =
            sample_interference_dataset(env, sweep.holdout, draw_seed * 2 + 2);
        SurrogateConfig sg = cfg.surrogate;
        sg.mode = arch;
        auto p = make_predictor(sg, PowerKind::Interference, s.geometry.antennas, k, draw_seed);
        SurrogateTraining t = arch == SurrogateMode::FC ? sg.fc_training : sg.model_training;
        t.seed = draw_seed;
        train_surrogate(*p, train, t);
        pt.nmse.push_back(nmse(*p, test));
      }
      out.push_back(std::move(pt));
    }
  }
  return out;
}

}  // namespace nullbeam
