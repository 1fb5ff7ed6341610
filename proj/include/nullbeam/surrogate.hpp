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
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nullbeam/agent.hpp"
#include "nullbeam/array.hpp"
#include "nullbeam/environment.hpp"
#include "nullbeam/neuralnet.hpp"

namespace nullbeam {

enum class PowerKind { Interference, Signal };

struct PowerSample {
  Eigen::VectorXcd weights;
  double power = 0.0;  ///< linear watts
};

/// Beams paired with one measured power (P_I+N or P_S).
class SurrogateDataset {
 public:
  SurrogateDataset(PowerKind kind, int antennas);

  PowerKind kind() const noexcept { return kind_; }
  int antennas() const noexcept { return antennas_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const std::vector<PowerSample>& samples() const noexcept { return samples_; }
  const PowerSample& operator[](std::size_t i) const { return samples_.at(i); }

  /// Throws std::invalid_argument on a size mismatch or a negative or
  /// non-finite power.
  void append(const Combiner& w, double power);
  void append(const SurrogateDataset& other);

  double mean_power() const;
  double mean_square_power() const;

  /// First `n` samples and the rest.
  std::pair<SurrogateDataset, SurrogateDataset> split(std::size_t n) const;

 private:
  PowerKind kind_;
  int antennas_;
  std::vector<PowerSample> samples_;
};

/// Scalar power predictor f(w). Internally fits targets divided by a fixed
/// scale (set from the training data) and multiplies it back on output.
class PowerPredictor {
 public:
  virtual ~PowerPredictor() = default;

  virtual int antennas() const = 0;
  virtual std::string architecture() const = 0;
  virtual std::unique_ptr<PowerPredictor> clone() const = 0;

  /// Prediction in linear watts. Not clamped.
  double predict(const Combiner& w) const { return scale_ * predict_normalized(w.weights()); }
  /// Same, clamped at zero, as used inside the surrogate environment.
  double predict_power(const Combiner& w) const;

  virtual double predict_normalized(const Eigen::VectorXcd& w) const = 0;

  /// Batch forward in training mode. Returns the mean squared error against
  /// `target` (normalized units) and stores parameter gradients.
  virtual double loss_and_gradient(const Eigen::MatrixXcd& w, const Eigen::VectorXd& target) = 0;

  virtual std::vector<std::span<double>> parameters() = 0;
  virtual std::vector<std::span<const double>> gradients() const = 0;
  /// Restores parameter constraints after an optimizer step.
  virtual void project() {}

  double scale() const noexcept { return scale_; }
  void set_scale(double s);

 protected:
  double scale_ = 1.0;
};

/// f(w) = ||Q^H w||^2 + b with Q complex M x rank and b >= 0. Without the
/// offset (literal mode) b is fixed at zero.
class ModelBasedPredictor final : public PowerPredictor {
 public:
  ModelBasedPredictor(int antennas, int rank, bool offset, std::uint64_t seed);
  /// Fixed factor, e.g. [sqrt(P_x) H | sigma I] for an exact model.
  ModelBasedPredictor(const Eigen::MatrixXcd& q, double offset);

  int antennas() const override { return static_cast<int>(re_.rows()); }
  int rank() const noexcept { return static_cast<int>(re_.cols()); }
  bool has_offset() const noexcept { return use_offset_; }
  std::string architecture() const override { return "model"; }
  std::unique_ptr<PowerPredictor> clone() const override;

  Eigen::MatrixXcd factor() const;
  double offset() const noexcept { return offset_[0]; }

  double predict_normalized(const Eigen::VectorXcd& w) const override;
  double loss_and_gradient(const Eigen::MatrixXcd& w, const Eigen::VectorXd& target) override;
  std::vector<std::span<double>> parameters() override;
  std::vector<std::span<const double>> gradients() const override;
  void project() override;

 private:
  Eigen::MatrixXd re_, im_;
  Eigen::VectorXd offset_{Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd grad_re_, grad_im_;
  Eigen::VectorXd grad_offset_{Eigen::VectorXd::Zero(1)};
  bool use_offset_ = true;
};

enum class FcEncoding { RealImag, Phase };

/// Dense network: 2M (or M phases) -> hidden -> hidden -> 1, batch-norm and
/// ReLU on the hidden layers.
class FCPredictor final : public PowerPredictor {
 public:
  FCPredictor(int antennas, int hidden, FcEncoding encoding, std::uint64_t seed);

  int antennas() const override { return antennas_; }
  FcEncoding encoding() const noexcept { return encoding_; }
  std::string architecture() const override { return "fc"; }
  std::unique_ptr<PowerPredictor> clone() const override;

  Eigen::MatrixXd encode(const Eigen::MatrixXcd& w) const;

  double predict_normalized(const Eigen::VectorXcd& w) const override;
  double loss_and_gradient(const Eigen::MatrixXcd& w, const Eigen::VectorXd& target) override;
  std::vector<std::span<double>> parameters() override;
  std::vector<std::span<const double>> gradients() const override;

  const nn::DenseNet& network() const noexcept { return net_; }

 private:
  int antennas_;
  FcEncoding encoding_;
  mutable nn::DenseNet net_;
};

struct SurrogateTraining {
  double learning_rate = 0.1;
  std::vector<int> milestones{50, 300, 400};
  double decay_factor = 0.1;
  std::size_t batch_size = 512;
  int epochs = 500;
  std::uint64_t seed = 1;

  static SurrogateTraining model_based();
  static SurrogateTraining fc();
};

struct TrainReport {
  std::vector<double> epoch_loss;  ///< mean batch loss, normalized units
  double final_mse = 0.0;          ///< full dataset, linear watts squared
};

/// Adam on the mean squared error. The scale is set to the dataset mean.
/// Samples are put in a canonical order before the seeded shuffle, so the
/// result does not depend on append order. A trailing batch of one sample
/// is merged into the previous batch. Throws std::invalid_argument on an
/// empty dataset or a width mismatch.
TrainReport train_surrogate(PowerPredictor& p, const SurrogateDataset& data,
                            const SurrogateTraining& settings);

/// MSE / mean(y^2) over `data`, predictions unclamped.
double nmse(const PowerPredictor& p, const SurrogateDataset& data);

/// A frozen signal/interference predictor pair.
struct SurrogatePair {
  std::shared_ptr<const PowerPredictor> signal;
  std::shared_ptr<const PowerPredictor> interference;
};

/// Holds the pair currently served to the agent. A retrained pair is
/// published in one step; readers keep whatever snapshot they fetched.
class SnapshotHolder {
 public:
  SurrogatePair current() const;
  void publish(SurrogatePair next);
  std::size_t version() const;

 private:
  mutable std::mutex mu_;
  SurrogatePair pair_;
  std::size_t version_ = 0;
};

/// Environment whose readings come from predictors instead of the radio.
class SurrogateEnvironment final : public Environment {
 public:
  SurrogateEnvironment(const SnapshotHolder& holder, const PhaseCodebook& codebook, int antennas);

  const PhaseCodebook& codebook() const override { return codebook_; }
  int antennas() const override { return antennas_; }
  /// P_I+N = predicted interference (floored at a tiny positive value),
  /// P_S+I+N = that plus the predicted signal power.
  PowerMeasurement measure(const Combiner& w) override;

 private:
  const SnapshotHolder& holder_;
  PhaseCodebook codebook_;
  int antennas_;
};

/// Single step against a fixed predictor pair.
StepOutcome virtual_step(const PowerPredictor& signal, const PowerPredictor& interference,
                         const PhaseCodebook& codebook, double prev_sinr,
                         const PhaseVector& action);

enum class SurrogateMode { None, ModelBased, FC };

struct SwitchConfig {
  long real_steps_per_round = 250;
  int rounds = 4;
  double nmse_threshold = 0.05;
  long stagnation_window = 500;
  /// Real plus virtual agent iterations; the virtual share is split evenly
  /// over the rounds.
  long total_iterations = 5000;

  void validate() const;
  long virtual_cap_per_round() const;
};

struct SurrogateConfig {
  SurrogateMode mode = SurrogateMode::None;
  int interference_rank = 0;  ///< 0: interferer count + 2
  int signal_rank = 2;
  bool model_offset = true;
  int fc_hidden = 64;
  FcEncoding fc_encoding = FcEncoding::RealImag;
  SurrogateTraining model_training = SurrogateTraining::model_based();
  SurrogateTraining fc_training = SurrogateTraining::fc();
  SwitchConfig switching;
  std::uint64_t seed = 1;
};

std::unique_ptr<PowerPredictor> make_predictor(const SurrogateConfig& cfg, PowerKind kind,
                                               int antennas, int interferers,
                                               std::uint64_t seed);

/// Alternation between real data collection and virtual interaction.
class SwitchController {
 public:
  enum class Phase { Real, Virtual, Done };

  explicit SwitchController(SwitchConfig config);

  const SwitchConfig& config() const noexcept { return config_; }
  Phase phase() const noexcept { return phase_; }
  int round() const noexcept { return round_; }

  /// Real -> Virtual. Throws StateError from any other phase.
  void enter_virtual();
  /// Virtual -> Real, or Done after the last round.
  void finish_round();

 private:
  SwitchConfig config_;
  Phase phase_ = Phase::Real;
  int round_ = 0;
};

struct RoundReport {
  int round = 0;
  double interference_nmse = 0.0;  ///< on the round's fresh samples, before training
  double signal_nmse = 0.0;
  bool interference_retrained = false;
  bool signal_retrained = false;
  long virtual_iterations = 0;
  double virtual_best_sinr = 0.0;    ///< predicted
  double validated_sinr = 0.0;       ///< the virtual best measured for real
};

struct AssistedResult {
  PhaseVector best_state;
  double best_sinr = 0.0;  ///< measured on the actual environment
  std::vector<IterationRecord> log;
  std::vector<RoundReport> rounds;
  std::size_t real_measurements = 0;
  long agent_iterations = 0;
  SurrogateDataset interference_data{PowerKind::Interference, 1};
  SurrogateDataset signal_data{PowerKind::Signal, 1};
};

/// Runs the real/virtual protocol. Every real measurement feeds both
/// datasets. Mode None degenerates to plain learning for total_iterations.
AssistedResult run_assisted_learning(ActualEnvironment& env, const ActorCriticConfig& agent,
                                     const SurrogateConfig& cfg,
                                     const Scenario* monitor = nullptr);

std::string to_string(SurrogateMode m);
SurrogateMode surrogate_mode_from_string(const std::string& s);
std::string to_string(FcEncoding e);
FcEncoding fc_encoding_from_string(const std::string& s);

}  // namespace nullbeam
