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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nullbeam/array.hpp"
#include "nullbeam/environment.hpp"
#include "nullbeam/neuralnet.hpp"

namespace nullbeam {

struct ActorCriticConfig {
  int antennas = 8;
  // Actor: M -> 16M -> 16M -> M. Critic: 2M -> 32M -> 16 -> 1.
  int actor_hidden_factor = 16;
  int critic_hidden_factor = 16;
  double explore_sigma = 0.5;  ///< radians
  double explore_decay = 0.995;
  double explore_floor = 0.05;
  std::size_t replay_capacity = 4096;
  std::size_t batch_size = 128;
  double gamma = 0.5;
  double tau = 0.005;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  std::uint64_t seed = 1;

  /// Throws ConfigError listing every offending field.
  void validate() const;
};

struct Transition {
  PhaseVector state;
  PhaseVector raw_action;  ///< unquantized; the only action seen by training
  PhaseVector action;      ///< quantized, applied to the environment
  int reward = -1;
  PhaseVector next_state;  ///< equals `action`
  double sinr = 0.0;
};

/// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_.at(i); }

  /// Uniform draw with replacement.
  std::vector<const Transition*> sample(std::size_t n, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

struct Action {
  PhaseVector raw;
  PhaseVector quantized;
};

struct TrainDiagnostics {
  double critic_loss = 0.0;
  double actor_objective = 0.0;  ///< mean Q(s, mu(s)) before the update
};

/// DDPG-style actor-critic over phase vectors. Quantization is applied only
/// to the action handed to the environment, never inside a gradient path.
class ActorCriticAgent {
 public:
  ActorCriticAgent(const ActorCriticConfig& config, const PhaseCodebook& codebook);

  const ActorCriticConfig& config() const noexcept { return config_; }
  const PhaseCodebook& codebook() const noexcept { return codebook_; }

  Action act(const PhaseVector& state, bool explore);

  /// One critic and one actor update plus soft target updates. Returns
  /// nullopt (and does nothing) while the buffer holds fewer than a batch.
  std::optional<TrainDiagnostics> train_step(const ReplayBuffer& buffer);

  double exploration_sigma() const noexcept { return sigma_; }
  void decay_exploration() noexcept;

  PhaseVector random_state();

  nn::DenseNet& actor() noexcept { return actor_; }
  nn::DenseNet& critic() noexcept { return critic_; }
  nn::DenseNet& actor_target() noexcept { return actor_target_; }
  nn::DenseNet& critic_target() noexcept { return critic_target_; }

 private:
  ActorCriticConfig config_;
  PhaseCodebook codebook_;
  nn::DenseNet actor_, critic_, actor_target_, critic_target_;
  nn::Adam actor_opt_, critic_opt_;
  std::mt19937_64 rng_;
  double sigma_;
};

/// One logged interaction.
struct IterationRecord {
  long iteration = 0;
  double sinr = 0.0;       ///< SINR the agent observed (measured or predicted)
  int reward = -1;
  double explore_sigma = 0.0;
  std::optional<double> critic_loss;
  std::optional<double> actor_objective;
  double best_sinr = 0.0;  ///< running best of the current tracker
  bool real = true;        ///< false for surrogate interactions
  std::optional<Metrics> truth;  ///< analytic metrics when a monitor is set
};

/// Running state of one continuing learning task: agent, replay, current
/// beam, previous SINR and the best-beam tracker.
class LearningSession {
 public:
  LearningSession(const ActorCriticConfig& config, const PhaseCodebook& codebook);

  /// Draws the random initial beam from the codebook and measures it.
  void begin(Environment& env);

  /// Re-measures the current beam in `env` (used after switching).
  void rebase(Environment& env);

  /// Runs at most `iterations` act/step/store/train cycles. With a positive
  /// `stagnation_window` stops once the tracked best has not improved for
  /// that many iterations. Returns the number of iterations executed.
  long run(Environment& env, long iterations, long stagnation_window = 0,
           const Scenario* monitor = nullptr);

  void reset_best();

  const PhaseVector& state() const noexcept { return state_; }
  double previous_sinr() const noexcept { return prev_sinr_; }
  const std::optional<PhaseVector>& best_state() const noexcept { return best_state_; }
  double best_sinr() const noexcept { return best_sinr_; }
  const std::vector<IterationRecord>& log() const noexcept { return log_; }
  long iterations() const noexcept { return iteration_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  ActorCriticAgent& agent() noexcept { return agent_; }

  /// Invoked after every step with the applied beam and its outcome.
  using Observer = std::function<void(const Combiner&, const StepOutcome&)>;
  void set_observer(Observer obs) { observer_ = std::move(obs); }

 private:
  ActorCriticAgent agent_;
  ReplayBuffer buffer_;
  PhaseVector state_;
  double prev_sinr_ = 0.0;
  bool started_ = false;
  std::optional<PhaseVector> best_state_;
  double best_sinr_ = -std::numeric_limits<double>::infinity();
  long iteration_ = 0;
  std::vector<IterationRecord> log_;
  Observer observer_;
};

struct LearnResult {
  PhaseVector best_state;
  double best_sinr = 0.0;  ///< as measured during learning
  std::vector<IterationRecord> log;
  std::size_t measurements = 0;
};

/// Plain online learning against one environment for `iterations` steps.
LearnResult learn(Environment& env, const ActorCriticConfig& config, long iterations,
                  const Scenario* monitor = nullptr);

}  // namespace nullbeam
