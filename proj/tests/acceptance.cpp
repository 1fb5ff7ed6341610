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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Per-seed progress goes to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "nullbeam/agent.hpp"
#include "nullbeam/environment.hpp"
#include "nullbeam/experiment.hpp"
#include "nullbeam/surrogate.hpp"
#include "scenarios.hpp"

using namespace nullbeam;
using nullbeam::testing::copy_gradients;
using nullbeam::testing::gradient_error;
using nullbeam::testing::random_scenario;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Verdict {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

ExperimentConfig config(const std::string& name) {
  return load_config(std::filesystem::path(NULLBEAM_CONFIG_DIR) / (name + ".json"));
}

double overall_sir_db(const Metrics& m) {
  double inter = 0.0;
  for (double g : m.interferer_gain) inter += g;
  return to_db(m.signal_gain / inter);
}

std::vector<RunArtifact> run_seeds(const ExperimentConfig& cfg, const std::string& tag) {
  std::vector<RunArtifact> out;
  for (std::uint64_t seed : cfg.seeds) {
    out.push_back(run_pipeline(cfg, seed));
    const auto& a = out.back();
    std::cerr << "  [" << tag << "] seed " << seed;
    if (!a.ok()) {
      std::cerr << " failed at " << a.failed_stage << ": " << a.error << "\n";
      continue;
    }
    std::cerr << " sir gain";
    for (double d : a.summary->sir_gain_db) std::cerr << ' ' << fmt(d);
    std::cerr << " dB, gain loss " << fmt(a.summary->gain_loss_db) << " dB, sinr "
              << fmt(a.summary->sinr_after_db) << " dB, " << fmt(a.runtime_seconds, 1) << " s\n";
  }
  return out;
}

// 1. Per-interferer SIR gain >= 10 dB and combining-gain loss <= 3 dB,
// medians over the seeds, at most 10 minutes per seed.
Verdict null_shaping(const std::vector<RunArtifact>& m16, const std::vector<RunArtifact>& m8) {
  Verdict v{true, ""};
  for (const auto* runs : {&m16, &m8}) {
    std::vector<double> g1, g2, loss;
    double slowest = 0.0;
    bool all_ok = true;
    for (const auto& a : *runs) {
      if (!a.ok()) {
        all_ok = false;
        continue;
      }
      g1.push_back(a.summary->sir_gain_db[0]);
      g2.push_back(a.summary->sir_gain_db[1]);
      loss.push_back(a.summary->gain_loss_db);
      slowest = std::max(slowest, a.runtime_seconds);
    }
    const int m = runs->front().config.scenario.antennas;
    const bool ok = all_ok && runs->size() >= 10 && median(g1) >= 10.0 && median(g2) >= 10.0 &&
                    median(loss) <= 3.0 && slowest <= 600.0;
    v.pass = v.pass && ok;
    v.detail += "M=" + std::to_string(m) + ": median sir gain " + fmt(median(g1)) + "/" +
                fmt(median(g2)) + " dB, median loss " + fmt(median(loss)) + " dB, slowest seed " +
                fmt(slowest, 0) + " s; ";
  }
  return v;
}

// 2. Overall SIR of the tried beam reaches 15 dB within 2000 aware
// interactions in at least 70% of the seeds.
Verdict learning_curve(const std::vector<RunArtifact>& runs) {
  int hits = 0, n = 0;
  std::vector<double> starts;
  for (const auto& a : runs) {
    if (!a.ok()) continue;
    ++n;
    for (std::size_t i = 0; i < a.aware_log.size() && a.aware_log[i].iteration < 2000; ++i) {
      const auto& t = a.aware_log[i].truth;
      if (i == 0 && t) starts.push_back(overall_sir_db(*t));
      if (t && overall_sir_db(*t) >= 15.0) {
        ++hits;
        break;
      }
    }
  }
  const int total = static_cast<int>(runs.size());
  return {total >= 10 && n == total && hits * 10 >= 7 * total,
          std::to_string(hits) + "/" + std::to_string(total) +
              " seeds reach 15 dB overall SIR within 2000 interactions (median first-beam SIR " +
              fmt(starts.empty() ? 0.0 : median(starts)) + " dB)"};
}

// 3. M=4, r=2: best learned SINR within 1 dB of the exhaustive optimum in
// at least 16 of 20 seeds, 3000 iterations, under a minute per seed.
Verdict oracle_equivalence() {
  int hits = 0;
  double slowest = 0.0;
  const ExperimentConfig base = config("null_shaping_m8");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioConfig sc = base.scenario;
    sc.antennas = 4;
    sc.phase_bits = 2;
    sc.interferer_count = 1;
    sc.seed = seed;
    const Scenario s = standalone_scenario(sc);
    const OracleResult best = exhaustive_search(s);
    ActorCriticConfig ac = base.agent;
    ac.antennas = 4;
    ac.seed = seed;
    ActualEnvironment env(s, seed);
    const auto t0 = std::chrono::steady_clock::now();
    const LearnResult r = learn(env, ac, 3000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    const double gap = to_db(best.sinr) - to_db(analytic_sinr(s, to_combiner(r.best_state)));
    if (gap <= 1.0) ++hits;
    std::cerr << "  [oracle] seed " << seed << " gap " << fmt(gap, 3) << " dB, " << fmt(secs, 1)
              << " s\n";
  }
  return {hits >= 16 && slowest < 60.0,
          std::to_string(hits) + "/20 seeds within 1 dB of the 256-beam optimum, slowest seed " +
              fmt(slowest, 1) + " s"};
}

// 4. Model-based predictor on 50 samples versus FC on 10000, M=8, mean
// held-out NMSE over 5 draws.
Verdict surrogate_crossover() {
  ExperimentConfig cfg = config("null_shaping_m8");
  SweepSettings model;
  model.sizes = {50};
  model.architectures = {SurrogateMode::ModelBased};
  model.draws = 5;
  SweepSettings fc = model;
  fc.sizes = {10000};
  fc.architectures = {SurrogateMode::FC};
  const double a = sweep_surrogate(cfg, model, 1).front().mean_nmse();
  const double b = sweep_surrogate(cfg, fc, 1).front().mean_nmse();
  return {a <= b, "model@50 " + sci(a) + " vs fc@10000 " + sci(b)};
}

// 5. Model-surrogate-assisted aware learning against plain aware learning:
// median final SINR within 3 dB, at most 1200 real measurement pairs.
Verdict assisted_parity(const std::vector<RunArtifact>& baseline) {
  ExperimentConfig cfg = config("assisted_m8");
  const auto assisted = run_seeds(cfg, "assisted");
  std::vector<double> a, b, b_meas;
  std::size_t most = 0;
  bool all_ok = true;
  for (const auto& r : assisted) {
    if (!r.ok()) {
      all_ok = false;
      continue;
    }
    a.push_back(r.summary->sinr_after_db);
    most = std::max(most, r.aware_measurements);
  }
  for (const auto& r : baseline) {
    if (!r.ok()) continue;
    b.push_back(r.summary->sinr_after_db);
    b_meas.push_back(static_cast<double>(r.aware_measurements));
  }
  const double gap = median(b) - median(a);
  return {all_ok && a.size() >= 10 && std::abs(gap) <= 3.0 && most <= 1200,
          "median sinr assisted " + fmt(median(a)) + " dB vs baseline " + fmt(median(b)) +
              " dB, real pairs at most " + std::to_string(most) + " vs baseline median " +
              fmt(median(b_meas), 0)};
}

PhaseVector random_codebook_beam(const PhaseCodebook& cb, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, cb.size() - 1);
  PhaseVector p(m);
  for (auto& v : p) v = cb.values()[pick(rng)];
  return p;
}

Combiner random_beam(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  PhaseVector p(m);
  for (auto& v : p) v = u(rng);
  return to_combiner(p);
}

double net_gradient_error(nn::DenseNet& net, int batch, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(net.inputs(), batch), c(net.outputs(), batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = n(rng);
  net.forward(x, nn::Mode::Training);
  net.backward(c);
  const auto analytic = copy_gradients(net.gradients());
  return gradient_error(net.parameters(), analytic, [&] {
    return (net.forward(x, nn::Mode::Training).array() * c.array()).sum();
  });
}

double predictor_gradient_error(PowerPredictor& p, int batch, std::mt19937_64& rng) {
  const int m = p.antennas();
  Eigen::MatrixXcd w(m, batch);
  Eigen::VectorXd y(batch);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < batch; ++i) {
    w.col(i) = random_beam(m, rng).weights();
    y[i] = u(rng);
  }
  p.loss_and_gradient(w, y);
  const auto analytic = copy_gradients(p.gradients());
  return gradient_error(p.parameters(), analytic, [&] { return p.loss_and_gradient(w, y); });
}

// 6. Exactness checks. Floating-point comparisons are bounded by a small
// multiple of machine epsilon scaled by the magnitudes involved.
Verdict exactness() {
  std::mt19937_64 rng(20240601);
  std::ostringstream why;
  bool ok = true;
  auto fail = [&](const std::string& what) {
    if (ok) why << what;
    ok = false;
  };

  double est_err = 0.0, quad_err = 0.0, norm_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + trial % 31;
    const int k = 1 + trial % 3;
    const Scenario s = random_scenario(rng, m, 1 + trial % 4, k);
    ActualEnvironment env(s);
    const PhaseVector p = random_codebook_beam(s.codebook, m, rng);
    const Combiner w = to_combiner(p);

    // Estimator against the analytic objective, in units of eps * (1 + SINR).
    const double exact = analytic_sinr(s, w);
    const double est = estimate_sinr(env.measure(w));
    est_err = std::max(est_err, std::abs(est - exact) / (kEps * (1.0 + exact)));

    Eigen::MatrixXcd h(m, k);
    for (int i = 0; i < k; ++i) h.col(i) = s.interferers[static_cast<std::size_t>(i)].vector();
    const Eigen::MatrixXcd a = s.transmit_power * h * h.adjoint() +
                               s.noise_power * Eigen::MatrixXcd::Identity(m, m);
    const double quad = (w.weights().adjoint() * a * w.weights())(0, 0).real();
    quad_err = std::max(quad_err, std::abs(interference_plus_noise_power(s, w) - quad) / (kEps * quad));

    norm_err = std::max(norm_err, std::abs(w.weights().squaredNorm() - 1.0) / kEps);
    norm_err = std::max(norm_err, std::abs(random_beam(m, rng).weights().squaredNorm() - 1.0) / kEps);

    std::uniform_real_distribution<double> u(-10.0, 10.0);
    PhaseVector raw(m);
    for (auto& v : raw) v = u(rng);
    const PhaseVector q = quantize(raw, s.codebook);
    if (!is_quantized(q, s.codebook) || quantize(q, s.codebook) != q) fail("quantization; ");
  }
  // Bounds scale with the summation length (up to 32 terms per inner product).
  if (est_err > 256.0) fail("estimator " + fmt(est_err, 1) + " eps; ");
  if (quad_err > 256.0) fail("quadratic form " + fmt(quad_err, 1) + " eps; ");
  if (norm_err > 64.0) fail("unit norm " + fmt(norm_err, 1) + " eps; ");

  double most_negative = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + trial % 13;
    ModelBasedPredictor p(m, 1 + trial % 5, trial % 2 == 0, 100 + trial);
    SurrogateDataset d(PowerKind::Interference, m);
    const Eigen::MatrixXcd q = Eigen::MatrixXcd::Random(m, 2);
    for (int i = 0; i < 200; ++i) {
      const Combiner w = random_beam(m, rng);
      d.append(w, (q.adjoint() * w.weights()).squaredNorm() + 0.01);
    }
    SurrogateTraining t = SurrogateTraining::model_based();
    t.epochs = 20;
    train_surrogate(p, d, t);
    for (int i = 0; i < 1000; ++i) most_negative = std::min(most_negative, p.predict(random_beam(m, rng)));
  }
  if (most_negative < 0.0) fail("model prediction " + sci(most_negative) + "; ");

  double grad = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ActorCriticConfig c;
    c.antennas = 2 + trial % 5;
    c.seed = 300 + static_cast<std::uint64_t>(trial);
    ActorCriticAgent agent(c, PhaseCodebook(3));
    grad = std::max(grad, net_gradient_error(agent.actor(), 6, rng));
    grad = std::max(grad, net_gradient_error(agent.critic(), 6, rng));
    ModelBasedPredictor mb(3 + trial % 6, 1 + trial % 4, trial % 2 == 0, 400 + trial);
    grad = std::max(grad, predictor_gradient_error(mb, 9, rng));
    FCPredictor fc(2 + trial % 5, 8, trial % 2 ? FcEncoding::Phase : FcEncoding::RealImag, 500 + trial);
    grad = std::max(grad, predictor_gradient_error(fc, 8, rng));
  }
  if (grad >= 1e-4) fail("gradient check " + sci(grad) + "; ");

  why << "estimator " << fmt(est_err, 1) << " eps, quadratic form " << fmt(quad_err, 1)
      << " eps, unit norm " << fmt(norm_err, 1) << " eps, min prediction " << sci(most_negative)
      << ", worst gradient rel err " << sci(grad);
  return {ok, why.str()};
}

// 7. Sub-HPBW separations trade at least 25% of signal power for at least
// 10 dB INR reduction; 40 degrees loses at most 15%. Medians over seeds.
Verdict hardware_geometries() {
  Verdict v{true, ""};
  for (const char* name : {"exp1", "exp2", "exp3"}) {
    const ExperimentConfig cfg = config(name);
    const auto runs = run_seeds(cfg, name);
    std::vector<double> loss, inr;
    bool all_ok = true;
    for (const auto& a : runs) {
      if (!a.ok()) {
        all_ok = false;
        continue;
      }
      loss.push_back(1.0 - a.summary->gain_after / a.summary->gain_before);
      inr.push_back(a.summary->inr_reduction_db);
    }
    const double sep = cfg.scenario.interferers.front().azimuth_deg -
                       cfg.scenario.target_azimuth_deg.value_or(0.0);
    const bool wide = std::abs(sep) > rad2deg(hpbw(cfg.scenario.antennas));
    const bool ok = all_ok && (wide ? median(loss) <= 0.15
                                    : median(loss) >= 0.25 && median(inr) >= 10.0);
    v.pass = v.pass && ok;
    v.detail += std::string(name) + " (" + fmt(std::abs(sep)) + " deg): signal loss " +
                fmt(100.0 * median(loss), 1) + "%, inr reduction " + fmt(median(inr)) + " dB; ";
  }
  return v;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;
  std::vector<RunArtifact> m16, m8;
  const auto ensure_runs = [&] {
    if (m16.empty()) m16 = run_seeds(config("null_shaping_m16"), "m16");
    if (m8.empty()) m8 = run_seeds(config("null_shaping_m8"), "m8");
  };

  criteria.emplace_back("null shaping", [&] {
    ensure_runs();
    return null_shaping(m16, m8);
  });
  criteria.emplace_back("learning curve", [&] {
    ensure_runs();
    return learning_curve(m16);
  });
  criteria.emplace_back("exhaustive oracle", oracle_equivalence);
  criteria.emplace_back("surrogate crossover", surrogate_crossover);
  criteria.emplace_back("assisted parity", [&] {
    ensure_runs();
    return assisted_parity(m8);
  });
  criteria.emplace_back("exactness", exactness);
  criteria.emplace_back("hardware geometries", hardware_geometries);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
