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

#include "nullbeam/agent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nullbeam/errors.hpp"

namespace nullbeam {

void ActorCriticConfig::validate() const {
  std::vector<std::string> bad;
  if (antennas < 1) bad.emplace_back("antennas");
  if (actor_hidden_factor < 1) bad.emplace_back("actor_hidden_factor");
  if (critic_hidden_factor < 1) bad.emplace_back("critic_hidden_factor");
  if (!(explore_sigma >= 0.0)) bad.emplace_back("explore_sigma");
  if (!(explore_decay > 0.0 && explore_decay <= 1.0)) bad.emplace_back("explore_decay");
  if (!(explore_floor >= 0.0)) bad.emplace_back("explore_floor");
  if (replay_capacity < 1) bad.emplace_back("replay_capacity");
  if (batch_size < 2) bad.emplace_back("batch_size");
  if (!(gamma >= 0.0 && gamma < 1.0)) bad.emplace_back("gamma");
  if (!(tau > 0.0 && tau <= 1.0)) bad.emplace_back("tau");
  if (!(actor_lr > 0.0)) bad.emplace_back("actor_lr");
  if (!(critic_lr > 0.0)) bad.emplace_back("critic_lr");
  if (!bad.empty()) {
    std::string msg = "invalid agent config:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(msg, std::move(bad));
  }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  items_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
  if (items_.empty()) throw std::invalid_argument("cannot sample an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<const Transition*> out(n);
  for (auto& p : out) p = &items_[pick(rng)];
  return out;
}

namespace {

nn::DenseNet make_actor(const ActorCriticConfig& c, std::uint64_t seed) {
  const int m = c.antennas;
  return nn::DenseNet(m,
                      {{c.actor_hidden_factor * m, nn::Activation::Relu, true},
                       {c.actor_hidden_factor * m, nn::Activation::Relu, true},
                       {m, nn::Activation::ScaledTanh, false, std::numbers::pi}},
                      seed);
}

nn::DenseNet make_critic(const ActorCriticConfig& c, std::uint64_t seed) {
  const int m = c.antennas;
  return nn::DenseNet(2 * m,
                      {{c.critic_hidden_factor * 2 * m, nn::Activation::Relu, true},
                       {c.critic_hidden_factor, nn::Activation::Relu, true},
                       {1, nn::Activation::Identity, false}},
                      seed);
}

}  // namespace

ActorCriticAgent::ActorCriticAgent(const ActorCriticConfig& config, const PhaseCodebook& codebook)
    : config_(config),
      codebook_(codebook),
      actor_opt_(config.actor_lr),
      critic_opt_(config.critic_lr),
      rng_(config.seed * 0x9e3779b97f4a7c15ULL + 7),
      sigma_(config.explore_sigma) {
  config_.validate();
  actor_ = make_actor(config_, config_.seed * 4 + 1);
  critic_ = make_critic(config_, config_.seed * 4 + 2);
  actor_target_ = actor_;
  critic_target_ = critic_;
}

Action ActorCriticAgent::act(const PhaseVector& state, bool explore) {
  if (state.size() != config_.antennas) throw std::invalid_argument("state length mismatch");
  Action a;
  a.raw = actor_.forward(state, nn::Mode::Inference).col(0);
  if (explore && sigma_ > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_);
    for (auto& v : a.raw) v = wrap_phase(v + noise(rng_));
  }
  a.quantized = quantize(a.raw, codebook_);
  return a;
}

std::optional<TrainDiagnostics> ActorCriticAgent::train_step(const ReplayBuffer& buffer) {
  const std::size_t n = config_.batch_size;
  if (buffer.size() < n) return std::nullopt;
  const int m = config_.antennas;
  const auto batch = buffer.sample(n, rng_);

  Eigen::MatrixXd state_action(2 * m, n), next_state(m, n);
  Eigen::RowVectorXd reward(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    state_action.col(c).head(m) = batch[i]->state;
    state_action.col(c).tail(m) = batch[i]->raw_action;
    next_state.col(c) = batch[i]->next_state;
    reward[c] = batch[i]->reward;
  }

  // Critic: regress onto r + gamma * Q'(s', mu'(s')).
  Eigen::MatrixXd next_sa(2 * m, n);
  next_sa.topRows(m) = next_state;
  next_sa.bottomRows(m) = actor_target_.forward(next_state, nn::Mode::Inference);
  const Eigen::MatrixXd target =
      reward + config_.gamma * critic_target_.forward(next_sa, nn::Mode::Inference);

  TrainDiagnostics diag;
  Eigen::MatrixXd grad;
  diag.critic_loss = nn::mse(critic_.forward(state_action, nn::Mode::Training), target, &grad);
  critic_.backward(grad);
  nn::adam_step(critic_opt_, critic_);

  // Actor: ascend Q(s, mu(s)) through the critic's input gradient.
  Eigen::MatrixXd policy_sa(2 * m, n);
  policy_sa.topRows(m) = state_action.topRows(m);
  policy_sa.bottomRows(m) = actor_.forward(state_action.topRows(m), nn::Mode::Training);
  const Eigen::MatrixXd q = critic_.forward(policy_sa, nn::Mode::Training);
  diag.actor_objective = q.mean();
  const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, n, -1.0 / static_cast<double>(n));
  const Eigen::MatrixXd d_input = critic_.backward(dq);
  actor_.backward(d_input.bottomRows(m));
  nn::adam_step(actor_opt_, actor_);

  nn::soft_update(critic_target_, critic_, config_.tau);
  nn::soft_update(actor_target_, actor_, config_.tau);
  return diag;
}

void ActorCriticAgent::decay_exploration() noexcept {
  sigma_ = std::max(config_.explore_floor, sigma_ * config_.explore_decay);
}

PhaseVector ActorCriticAgent::random_state() {
  std::uniform_int_distribution<std::size_t> pick(0, codebook_.size() - 1);
  PhaseVector s(config_.antennas);
  for (auto& v : s) v = codebook_.values()[pick(rng_)];
  return s;
}

LearningSession::LearningSession(const ActorCriticConfig& config, const PhaseCodebook& codebook)
    : agent_(config, codebook), buffer_(config.replay_capacity) {}

void LearningSession::begin(Environment& env) {
  if (env.antennas() != agent_.config().antennas) {
    throw std::invalid_argument("environment and agent disagree on the array size");
  }
  state_ = agent_.random_state();
  prev_sinr_ = env.evaluate(state_);
  started_ = true;
}

void LearningSession::rebase(Environment& env) {
  if (!started_) throw StateError("rebase before begin");
  prev_sinr_ = env.evaluate(state_);
}

void LearningSession::reset_best() {
  best_state_.reset();
  best_sinr_ = -std::numeric_limits<double>::infinity();
}

long LearningSession::run(Environment& env, long iterations, long stagnation_window,
                          const Scenario* monitor) {
  if (!started_) begin(env);
  long since_improvement = 0;
  long done = 0;
  for (; done < iterations; ++done) {
    if (stagnation_window > 0 && since_improvement >= stagnation_window) break;
    const Action a = agent_.act(state_, true);
    const StepOutcome out = env.step(prev_sinr_, a.quantized);
    if (observer_) observer_(Combiner::from_phases(a.quantized), out);

    buffer_.push(Transition{state_, a.raw, a.quantized, out.reward, out.next_state, out.sinr});
    const auto diag = agent_.train_step(buffer_);

    ++iteration_;
    if (out.sinr > best_sinr_) {
      best_sinr_ = out.sinr;
      best_state_ = a.quantized;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }

    IterationRecord rec;
    rec.iteration = iteration_;
    rec.sinr = out.sinr;
    rec.reward = out.reward;
    rec.explore_sigma = agent_.exploration_sigma();
    if (diag) {
      rec.critic_loss = diag->critic_loss;
      rec.actor_objective = diag->actor_objective;
    }
    rec.best_sinr = best_sinr_;
    rec.real = dynamic_cast<ActualEnvironment*>(&env) != nullptr;
    if (monitor) rec.truth = full_metrics(*monitor, Combiner::from_phases(a.quantized));
    log_.push_back(std::move(rec));

    agent_.decay_exploration();
    state_ = out.next_state;
    prev_sinr_ = out.sinr;
  }
  return done;
}

LearnResult learn(Environment& env, const ActorCriticConfig& config, long iterations,
                  const Scenario* monitor) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  LearningSession session(config, env.codebook());
  const std::size_t before = env.measurement_count();
  session.begin(env);
  session.run(env, iterations, 0, monitor);
  LearnResult r;
  r.best_state = *session.best_state();
  r.best_sinr = session.best_sinr();
  r.log = session.log();
  r.measurements = env.measurement_count() - before;
  return r;
}

}  // namespace nullbeam
