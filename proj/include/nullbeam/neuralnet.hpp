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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nullbeam::nn {

enum class Activation { Identity, Relu, Tanh, ScaledTanh };
enum class Mode { Training, Inference };

struct LayerSpec {
  int units = 1;
  Activation activation = Activation::Identity;
  bool batch_norm = false;
  double scale = 1.0;  ///< output multiplier for ScaledTanh
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // units x inputs
  Eigen::VectorXd bias;
  Activation activation = Activation::Identity;
  double scale = 1.0;
  bool batch_norm = false;
  Eigen::VectorXd gamma, beta, running_mean, running_var;

  Eigen::MatrixXd grad_weight;
  Eigen::VectorXd grad_bias, grad_gamma, grad_beta;

  // Forward cache.
  Eigen::MatrixXd input, normalized, output;
  Eigen::VectorXd inv_std;
};

/// Feed-forward stack of dense -> [batch-norm] -> activation layers.
/// Batches are column-major: one sample per column.
class DenseNet {
 public:
  static constexpr double kBatchNormMomentum = 0.9;
  static constexpr double kBatchNormEps = 1e-5;

  DenseNet() = default;
  DenseNet(int inputs, const std::vector<LayerSpec>& layers, std::uint64_t seed);

  int inputs() const noexcept { return inputs_; }
  int outputs() const noexcept;
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  /// Training mode normalizes with batch statistics (batch >= 2 required
  /// when any layer uses batch-norm) and updates the running statistics.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch, Mode mode);

  /// Gradient of the loss w.r.t. the last forward's input. Overwrites the
  /// parameter gradients. Throws StateError without a cached forward.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

  /// Trainable tensors, in a fixed order shared with gradients().
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;
  std::vector<std::span<const double>> gradients() const;
  std::size_t parameter_count() const;

  /// Running batch-norm statistics (not trained, but soft-updated/saved).
  std::vector<std::span<double>> buffers();
  std::vector<std::span<const double>> buffers() const;

 private:
  int inputs_ = 0;
  std::vector<DenseLayer> layers_;
  bool cached_ = false;
  Mode cached_mode_ = Mode::Inference;
};

/// target <- tau * source + (1 - tau) * target, parameters and buffers.
void soft_update(DenseNet& target, const DenseNet& source, double tau);

/// Multiply-by-factor learning-rate decay at the listed epochs
/// (zero-based; epoch e uses initial * factor^#{m <= e}).
struct LrSchedule {
  double initial = 1e-3;
  std::vector<int> milestones;
  double factor = 0.1;

  double rate(int epoch) const;
};

/// Adam with bias correction. Moment buffers are sized on the first step.
class Adam {
 public:
  explicit Adam(double learning_rate = 1e-3, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  void set_learning_rate(double lr) noexcept { lr_ = lr; }
  double learning_rate() const noexcept { return lr_; }
  long steps() const noexcept { return t_; }

  /// Throws std::invalid_argument on shape mismatch.
  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<const double>>& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

inline void adam_step(Adam& opt, DenseNet& net) {
  opt.step(net.parameters(), net.gradients());
}

/// Mean squared error over all entries and its gradient w.r.t. prediction.
double mse(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target,
           Eigen::MatrixXd* grad = nullptr);

/// JSON blob: version, shapes, row-major parameters and buffers.
std::string save_checkpoint(const DenseNet& net);
DenseNet load_checkpoint(const std::string& blob);

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

}  // namespace nullbeam::nn
