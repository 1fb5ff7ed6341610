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

#include "nullbeam/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam {

SurrogateDataset::SurrogateDataset(PowerKind kind, int antennas)
    : kind_(kind), antennas_(antennas) {
  if (antennas < 1) throw std::invalid_argument("dataset needs at least one antenna");
}

void SurrogateDataset::append(const Combiner& w, double power) {
  if (w.size() != antennas_) throw std::invalid_argument("beam width does not match the dataset");
  if (!std::isfinite(power) || power < 0.0) {
    throw std::invalid_argument("dataset powers must be finite and nonnegative");
  }
  samples_.push_back({w.weights(), power});
}

void SurrogateDataset::append(const SurrogateDataset& other) {
  if (other.antennas_ != antennas_ || other.kind_ != kind_) {
    throw std::invalid_argument("cannot merge datasets of different shape or kind");
  }
  samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
}

double SurrogateDataset::mean_power() const {
  if (samples_.empty()) throw std::invalid_argument("empty dataset");
  double s = 0.0;
  for (const auto& x : samples_) s += x.power;
  return s / static_cast<double>(samples_.size());
}

double SurrogateDataset::mean_square_power() const {
  if (samples_.empty()) throw std::invalid_argument("empty dataset");
  double s = 0.0;
  for (const auto& x : samples_) s += x.power * x.power;
  return s / static_cast<double>(samples_.size());
}

std::pair<SurrogateDataset, SurrogateDataset> SurrogateDataset::split(std::size_t n) const {
  n = std::min(n, samples_.size());
  SurrogateDataset head(kind_, antennas_), tail(kind_, antennas_);
  head.samples_.assign(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n));
  tail.samples_.assign(samples_.begin() + static_cast<std::ptrdiff_t>(n), samples_.end());
  return {std::move(head), std::move(tail)};
}

double PowerPredictor::predict_power(const Combiner& w) const {
  return std::max(0.0, predict(w));
}

void PowerPredictor::set_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("scale must be positive");
  scale_ = s;
}

// ---------------------------------------------------------------------------

ModelBasedPredictor::ModelBasedPredictor(int antennas, int rank, bool offset, std::uint64_t seed)
    : use_offset_(offset) {
  if (antennas < 1 || rank < 1) throw std::invalid_argument("model needs antennas and rank >= 1");
  // E||Q^H w||^2 = rank * var for unit-norm w; start near 1 in normalized units.
  const double b0 = offset ? 0.1 : 0.0;
  const double sd = std::sqrt((1.0 - b0) / (2.0 * rank));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sd);
  re_.resize(antennas, rank);
  im_.resize(antennas, rank);
  for (Eigen::Index i = 0; i < re_.size(); ++i) {
    re_.data()[i] = n(rng);
    im_.data()[i] = n(rng);
  }
  offset_[0] = b0;
  grad_re_ = Eigen::MatrixXd::Zero(antennas, rank);
  grad_im_ = Eigen::MatrixXd::Zero(antennas, rank);
}

ModelBasedPredictor::ModelBasedPredictor(const Eigen::MatrixXcd& q, double offset)
    : re_(q.real()), im_(q.imag()), use_offset_(offset != 0.0) {
  if (q.size() == 0) throw std::invalid_argument("empty factor");
  if (offset < 0.0) throw std::invalid_argument("offset must be nonnegative");
  offset_[0] = offset;
  grad_re_ = Eigen::MatrixXd::Zero(re_.rows(), re_.cols());
  grad_im_ = Eigen::MatrixXd::Zero(re_.rows(), re_.cols());
}

std::unique_ptr<PowerPredictor> ModelBasedPredictor::clone() const {
  return std::make_unique<ModelBasedPredictor>(*this);
}

Eigen::MatrixXcd ModelBasedPredictor::factor() const {
  Eigen::MatrixXcd q(re_.rows(), re_.cols());
  q.real() = re_;
  q.imag() = im_;
  return q;
}

double ModelBasedPredictor::predict_normalized(const Eigen::VectorXcd& w) const {
  if (w.size() != re_.rows()) throw std::invalid_argument("beam width does not match the model");
  const Eigen::VectorXd u = w.real(), v = w.imag();
  const Eigen::VectorXd zr = re_.transpose() * u + im_.transpose() * v;
  const Eigen::VectorXd zi = re_.transpose() * v - im_.transpose() * u;
  return zr.squaredNorm() + zi.squaredNorm() + offset_[0];
}

double ModelBasedPredictor::loss_and_gradient(const Eigen::MatrixXcd& w,
                                              const Eigen::VectorXd& target) {
  const auto n = static_cast<double>(w.cols());
  const Eigen::MatrixXd u = w.real(), v = w.imag();
  // Z = Q^H W split into real and imaginary parts.
  const Eigen::MatrixXd zr = re_.transpose() * u + im_.transpose() * v;
  const Eigen::MatrixXd zi = re_.transpose() * v - im_.transpose() * u;
  const Eigen::RowVectorXd pred =
      (zr.array().square() + zi.array().square()).colwise().sum() + offset_[0];
  const Eigen::RowVectorXd diff = pred - target.transpose();
  const Eigen::RowVectorXd g = 2.0 * diff / n;

  // d||Q^H w||^2 / dQ = 2 w (w^H Q), real and imaginary parts.
  const Eigen::MatrixXd gzr = zr.array().rowwise() * g.array();
  const Eigen::MatrixXd gzi = zi.array().rowwise() * g.array();
  grad_re_ = 2.0 * (u * gzr.transpose() + v * gzi.transpose());
  grad_im_ = 2.0 * (v * gzr.transpose() - u * gzi.transpose());
  grad_offset_[0] = use_offset_ ? g.sum() : 0.0;
  return diff.squaredNorm() / n;
}

std::vector<std::span<double>> ModelBasedPredictor::parameters() {
  std::vector<std::span<double>> out{{re_.data(), static_cast<std::size_t>(re_.size())},
                                     {im_.data(), static_cast<std::size_t>(im_.size())}};
  if (use_offset_) out.emplace_back(offset_.data(), 1);
  return out;
}

std::vector<std::span<const double>> ModelBasedPredictor::gradients() const {
  std::vector<std::span<const double>> out{
      {grad_re_.data(), static_cast<std::size_t>(grad_re_.size())},
      {grad_im_.data(), static_cast<std::size_t>(grad_im_.size())}};
  if (use_offset_) out.emplace_back(grad_offset_.data(), 1);
  return out;
}

void ModelBasedPredictor::project() {
  offset_[0] = use_offset_ ? std::max(0.0, offset_[0]) : 0.0;
}

// ---------------------------------------------------------------------------

FCPredictor::FCPredictor(int antennas, int hidden, FcEncoding encoding, std::uint64_t seed)
    : antennas_(antennas), encoding_(encoding) {
  if (antennas < 1 || hidden < 1) throw std::invalid_argument("fc predictor sizes must be >= 1");
  const int inputs = encoding == FcEncoding::RealImag ? 2 * antennas : antennas;
  net_ = nn::DenseNet(inputs,
                      {{hidden, nn::Activation::Relu, true},
                       {hidden, nn::Activation::Relu, true},
                       {1, nn::Activation::Identity, false}},
                      seed);
}

std::unique_ptr<PowerPredictor> FCPredictor::clone() const {
  return std::make_unique<FCPredictor>(*this);
}

Eigen::MatrixXd FCPredictor::encode(const Eigen::MatrixXcd& w) const {
  if (w.rows() != antennas_) throw std::invalid_argument("beam width does not match the network");
  if (encoding_ == FcEncoding::Phase) return w.array().arg().matrix();
  Eigen::MatrixXd x(2 * antennas_, w.cols());
  x.topRows(antennas_) = w.real();
  x.bottomRows(antennas_) = w.imag();
  return x;
}

double FCPredictor::predict_normalized(const Eigen::VectorXcd& w) const {
  return net_.forward(encode(w), nn::Mode::Inference)(0, 0);
}

double FCPredictor::loss_and_gradient(const Eigen::MatrixXcd& w, const Eigen::VectorXd& target) {
  Eigen::MatrixXd grad;
  const double loss = nn::mse(net_.forward(encode(w), nn::Mode::Training), target.transpose(), &grad);
  net_.backward(grad);
  return loss;
}

std::vector<std::span<double>> FCPredictor::parameters() { return net_.parameters(); }

std::vector<std::span<const double>> FCPredictor::gradients() const { return net_.gradients(); }

// ---------------------------------------------------------------------------

SurrogateTraining SurrogateTraining::model_based() {
  SurrogateTraining t;
  t.learning_rate = 0.1;
  t.milestones = {50, 300, 400};
  return t;
}

SurrogateTraining SurrogateTraining::fc() {
  SurrogateTraining t;
  t.learning_rate = 0.01;
  t.milestones = {100, 300, 400};
  return t;
}

namespace {

bool sample_less(const PowerSample& a, const PowerSample& b) {
  for (Eigen::Index i = 0; i < a.weights.size(); ++i) {
    if (a.weights[i].real() != b.weights[i].real()) return a.weights[i].real() < b.weights[i].real();
    if (a.weights[i].imag() != b.weights[i].imag()) return a.weights[i].imag() < b.weights[i].imag();
  }
  return a.power < b.power;
}

}  // namespace

TrainReport train_surrogate(PowerPredictor& p, const SurrogateDataset& data,
                            const SurrogateTraining& settings) {
  if (data.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  if (data.antennas() != p.antennas()) throw std::invalid_argument("dataset width mismatch");
  if (settings.batch_size < 1 || settings.epochs < 1) {
    throw std::invalid_argument("batch size and epochs must be positive");
  }

  std::vector<PowerSample> samples = data.samples();
  std::sort(samples.begin(), samples.end(), sample_less);

  // Summed in canonical order so the scale does not depend on append order.
  double mean = 0.0;
  for (const auto& x : samples) mean += x.power;
  mean /= static_cast<double>(samples.size());
  p.set_scale(mean > 0.0 ? mean : 1.0);

  const std::size_t n = samples.size();
  const std::size_t batch = std::min(settings.batch_size, n);
  std::vector<std::size_t> bounds;
  for (std::size_t b = 0; b < n; b += batch) bounds.push_back(b);
  if (bounds.size() > 1 && n - bounds.back() == 1) bounds.pop_back();
  bounds.push_back(n);

  const int m = p.antennas();
  nn::LrSchedule schedule{settings.learning_rate, settings.milestones, settings.decay_factor};
  nn::Adam opt(settings.learning_rate);
  std::mt19937_64 rng(settings.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  report.epoch_loss.reserve(static_cast<std::size_t>(settings.epochs));
  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    opt.set_learning_rate(schedule.rate(epoch));
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const auto lo = bounds[b], hi = bounds[b + 1];
      Eigen::MatrixXcd w(m, static_cast<Eigen::Index>(hi - lo));
      Eigen::VectorXd y(static_cast<Eigen::Index>(hi - lo));
      for (std::size_t i = lo; i < hi; ++i) {
        const auto c = static_cast<Eigen::Index>(i - lo);
        w.col(c) = samples[order[i]].weights;
        y[c] = samples[order[i]].power / p.scale();
      }
      total += p.loss_and_gradient(w, y);
      opt.step(p.parameters(), p.gradients());
      p.project();
    }
    report.epoch_loss.push_back(total / static_cast<double>(bounds.size() - 1));
  }

  double se = 0.0;
  for (const auto& s : samples) {
    const double d = p.scale() * p.predict_normalized(s.weights) - s.power;
    se += d * d;
  }
  report.final_mse = se / static_cast<double>(n);
  return report;
}

double nmse(const PowerPredictor& p, const SurrogateDataset& data) {
  if (data.empty()) throw std::invalid_argument("cannot score an empty dataset");
  double se = 0.0, sq = 0.0;
  for (const auto& s : data.samples()) {
    const double d = p.scale() * p.predict_normalized(s.weights) - s.power;
    se += d * d;
    sq += s.power * s.power;
  }
  if (!(sq > 0.0)) throw std::invalid_argument("nmse undefined for all-zero targets");
  return se / sq;
}

// ---------------------------------------------------------------------------

SurrogatePair SnapshotHolder::current() const {
  std::lock_guard lock(mu_);
  return pair_;
}

void SnapshotHolder::publish(SurrogatePair next) {
  if (!next.signal || !next.interference) throw std::invalid_argument("incomplete predictor pair");
  std::lock_guard lock(mu_);
  pair_ = std::move(next);
  ++version_;
}

std::size_t SnapshotHolder::version() const {
  std::lock_guard lock(mu_);
  return version_;
}

namespace {

// Keeps P_I+N strictly positive so an SINR can always be formed.
constexpr double kPowerFloor = 1e-15;

PowerMeasurement predicted_measurement(const PowerPredictor& signal,
                                       const PowerPredictor& interference, const Combiner& w) {
  PowerMeasurement m;
  m.interference_noise = std::max(kPowerFloor, interference.predict_power(w));
  m.signal_interference_noise = m.interference_noise + signal.predict_power(w);
  return m;
}

}  // namespace

SurrogateEnvironment::SurrogateEnvironment(const SnapshotHolder& holder,
                                           const PhaseCodebook& codebook, int antennas)
    : holder_(holder), codebook_(codebook), antennas_(antennas) {}

PowerMeasurement SurrogateEnvironment::measure(const Combiner& w) {
  const SurrogatePair pair = holder_.current();
  if (!pair.signal || !pair.interference) throw StateError("no surrogate has been published");
  ++measurements_;
  return predicted_measurement(*pair.signal, *pair.interference, w);
}

StepOutcome virtual_step(const PowerPredictor& signal, const PowerPredictor& interference,
                         const PhaseCodebook& codebook, double prev_sinr,
                         const PhaseVector& action) {
  if (action.size() != signal.antennas() || action.size() != interference.antennas()) {
    throw std::invalid_argument("action length does not match the predictors");
  }
  if (!is_quantized(action, codebook)) {
    throw std::invalid_argument("action must be quantized to the phase codebook");
  }
  StepOutcome out;
  out.next_state = action;
  out.measurement = predicted_measurement(signal, interference, Combiner::from_phases(action));
  out.sinr = estimate_sinr(out.measurement);
  out.reward = binary_reward(out.sinr, prev_sinr);
  return out;
}

// ---------------------------------------------------------------------------

void SwitchConfig::validate() const {
  std::vector<std::string> bad;
  if (real_steps_per_round < 1) bad.emplace_back("real_steps_per_round");
  if (rounds < 1) bad.emplace_back("rounds");
  if (!(nmse_threshold >= 0.0)) bad.emplace_back("nmse_threshold");
  if (stagnation_window < 0) bad.emplace_back("stagnation_window");
  if (total_iterations < 1) bad.emplace_back("total_iterations");
  if (!bad.empty()) {
    std::string msg = "invalid switch config:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(msg, std::move(bad));
  }
}

long SwitchConfig::virtual_cap_per_round() const {
  const long spare = total_iterations - real_steps_per_round * rounds;
  return spare > 0 ? spare / rounds : 0;
}

std::unique_ptr<PowerPredictor> make_predictor(const SurrogateConfig& cfg, PowerKind kind,
                                               int antennas, int interferers,
                                               std::uint64_t seed) {
  switch (cfg.mode) {
    case SurrogateMode::ModelBased: {
      int rank = kind == PowerKind::Signal ? cfg.signal_rank : cfg.interference_rank;
      if (kind == PowerKind::Interference && rank == 0) rank = interferers + 2;
      return std::make_unique<ModelBasedPredictor>(antennas, rank, cfg.model_offset, seed);
    }
    case SurrogateMode::FC:
      return std::make_unique<FCPredictor>(antennas, cfg.fc_hidden, cfg.fc_encoding, seed);
    case SurrogateMode::None:
      break;
  }
  throw std::invalid_argument("surrogate mode 'none' has no predictor");
}

SwitchController::SwitchController(SwitchConfig config) : config_(config) {
  config_.validate();
}

void SwitchController::enter_virtual() {
  if (phase_ != Phase::Real) throw StateError("virtual phase must follow a real phase");
  phase_ = Phase::Virtual;
}

void SwitchController::finish_round() {
  if (phase_ != Phase::Virtual) throw StateError("a round ends after its virtual phase");
  ++round_;
  phase_ = round_ >= config_.rounds ? Phase::Done : Phase::Real;
}

namespace {

const SurrogateTraining& training_for(const SurrogateConfig& cfg) {
  return cfg.mode == SurrogateMode::FC ? cfg.fc_training : cfg.model_training;
}

// Clones `current` (or builds a fresh predictor), fits it on `data` and
// returns the new snapshot.
std::shared_ptr<const PowerPredictor> refit(const std::shared_ptr<const PowerPredictor>& current,
                                            const SurrogateConfig& cfg, PowerKind kind,
                                            const SurrogateDataset& data, int interferers,
                                            std::uint64_t seed) {
  std::unique_ptr<PowerPredictor> p =
      current ? current->clone() : make_predictor(cfg, kind, data.antennas(), interferers, seed);
  SurrogateTraining t = training_for(cfg);
  t.seed = seed;
  train_surrogate(*p, data, t);
  return std::shared_ptr<const PowerPredictor>(std::move(p));
}

}  // namespace

AssistedResult run_assisted_learning(ActualEnvironment& env, const ActorCriticConfig& agent,
                                     const SurrogateConfig& cfg, const Scenario* monitor) {
  const int m = env.antennas();
  const int k = static_cast<int>(env.scenario().num_interferers());
  const std::size_t before = env.measurement_count();

  AssistedResult result;
  result.interference_data = SurrogateDataset(PowerKind::Interference, m);
  result.signal_data = SurrogateDataset(PowerKind::Signal, m);

  LearningSession session(agent, env.codebook());

  if (cfg.mode == SurrogateMode::None) {
    session.begin(env);
    session.run(env, cfg.switching.total_iterations, 0, monitor);
    result.best_state = *session.best_state();
    result.best_sinr = env.evaluate(result.best_state);
    result.log = session.log();
    result.agent_iterations = session.iterations();
    result.real_measurements = env.measurement_count() - before;
    return result;
  }

  SwitchController ctl(cfg.switching);
  SnapshotHolder holder;
  SurrogateEnvironment venv(holder, env.codebook(), m);

  SurrogateDataset fresh_in(PowerKind::Interference, m), fresh_s(PowerKind::Signal, m);
  bool collecting = false;
  session.set_observer([&](const Combiner& w, const StepOutcome& out) {
    if (!collecting) return;
    fresh_in.append(w, out.measurement.interference_noise);
    fresh_s.append(w, std::max(0.0, out.measurement.signal()));
  });

  std::optional<PhaseVector> best;
  double best_sinr = -std::numeric_limits<double>::infinity();
  auto consider = [&](const PhaseVector& s, double sinr) {
    if (sinr > best_sinr) {
      best_sinr = sinr;
      best = s;
    }
  };

  session.begin(env);
  while (ctl.phase() != SwitchController::Phase::Done) {
    RoundReport rep;
    rep.round = ctl.round();

    // Real interaction and data collection.
    if (ctl.round() > 0) session.rebase(env);
    session.reset_best();
    fresh_in = SurrogateDataset(PowerKind::Interference, m);
    fresh_s = SurrogateDataset(PowerKind::Signal, m);
    collecting = true;
    session.run(env, cfg.switching.real_steps_per_round, 0, monitor);
    collecting = false;
    if (session.best_state()) consider(*session.best_state(), session.best_sinr());

    // Retrain only predictors that no longer describe the fresh data.
    const SurrogatePair current = holder.current();
    rep.interference_nmse = current.interference ? nmse(*current.interference, fresh_in)
                                                 : std::numeric_limits<double>::infinity();
    rep.signal_nmse = current.signal ? nmse(*current.signal, fresh_s)
                                     : std::numeric_limits<double>::infinity();
    result.interference_data.append(fresh_in);
    result.signal_data.append(fresh_s);
    SurrogatePair next = current;
    const std::uint64_t seed = cfg.seed * 1000 + static_cast<std::uint64_t>(ctl.round());
    if (!(rep.interference_nmse < cfg.switching.nmse_threshold)) {
      next.interference = refit(current.interference, cfg, PowerKind::Interference,
                                result.interference_data, k, seed);
      rep.interference_retrained = true;
    }
    if (!(rep.signal_nmse < cfg.switching.nmse_threshold)) {
      next.signal = refit(current.signal, cfg, PowerKind::Signal, result.signal_data, k, seed + 500);
      rep.signal_retrained = true;
    }
    holder.publish(next);

    // Virtual interaction until the predicted best stagnates.
    ctl.enter_virtual();
    session.rebase(venv);
    session.reset_best();
    rep.virtual_iterations = session.run(venv, cfg.switching.virtual_cap_per_round(),
                                         cfg.switching.stagnation_window, monitor);
    if (session.best_state()) {
      rep.virtual_best_sinr = session.best_sinr();
      rep.validated_sinr = env.evaluate(*session.best_state());
      consider(*session.best_state(), rep.validated_sinr);
    }
    result.rounds.push_back(rep);
    ctl.finish_round();
  }

  result.best_state = *best;
  result.best_sinr = env.evaluate(*best);
  result.log = session.log();
  result.agent_iterations = session.iterations();
  result.real_measurements = env.measurement_count() - before;
  return result;
}

std::string to_string(SurrogateMode m) {
  switch (m) {
    case SurrogateMode::None: return "none";
    case SurrogateMode::ModelBased: return "model";
    case SurrogateMode::FC: return "fc";
  }
  return "none";
}

SurrogateMode surrogate_mode_from_string(const std::string& s) {
  if (s == "none") return SurrogateMode::None;
  if (s == "model" || s == "model-based") return SurrogateMode::ModelBased;
  if (s == "fc") return SurrogateMode::FC;
  throw std::invalid_argument("unknown surrogate mode: " + s);
}

std::string to_string(FcEncoding e) {
  return e == FcEncoding::RealImag ? "real-imag" : "phase";
}

FcEncoding fc_encoding_from_string(const std::string& s) {
  if (s == "real-imag") return FcEncoding::RealImag;
  if (s == "phase") return FcEncoding::Phase;
  throw std::invalid_argument("unknown fc encoding: " + s);
}

}  // namespace nullbeam
