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
#include <random>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "nullbeam/errors.hpp"
#include "nullbeam/neuralnet.hpp"

using namespace nullbeam;
using namespace nullbeam::nn;
using nullbeam::testing::copy_gradients;
using nullbeam::testing::gradient_error;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng, double s = 1.0) {
  std::normal_distribution<double> n(0.0, s);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  return x;
}

// Perturbs batch-norm scale and shift away from their 1/0 init so the check
// covers their gradients in a generic position.
void jitter_batch_norm(DenseNet& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5), v(-0.3, 0.3);
  for (auto& l : net.layers()) {
    if (!l.batch_norm) continue;
    for (auto& g : l.gamma) g = u(rng);
    for (auto& b : l.beta) b = v(rng);
  }
}

// Worst relative error over parameters and inputs for the loss sum(c .* f(x)).
double check_net(DenseNet& net, int batch, std::mt19937_64& rng) {
  const Eigen::MatrixXd x = random_matrix(net.inputs(), batch, rng);
  const Eigen::MatrixXd c = random_matrix(net.outputs(), batch, rng);
  net.forward(x, Mode::Training);
  const Eigen::MatrixXd dx = net.backward(c);
  const auto analytic = copy_gradients(net.gradients());
  const auto loss = [&] { return (net.forward(x, Mode::Training).array() * c.array()).sum(); };
  double worst = gradient_error(net.parameters(), analytic, loss);

  Eigen::MatrixXd xi = x;
  std::vector<std::span<double>> in{{xi.data(), static_cast<std::size_t>(xi.size())}};
  std::vector<std::vector<double>> dxa{{dx.data(), dx.data() + dx.size()}};
  const auto loss_x = [&] { return (net.forward(xi, Mode::Training).array() * c.array()).sum(); };
  return std::max(worst, gradient_error(in, dxa, loss_x));
}

DenseNet actor_net(int m, std::uint64_t seed) {
  return DenseNet(m, {{16 * m, Activation::Relu, true}, {16 * m, Activation::Relu, true},
                      {m, Activation::ScaledTanh, false, std::numbers::pi}}, seed);
}

DenseNet critic_net(int m, std::uint64_t seed) {
  return DenseNet(2 * m, {{32 * m, Activation::Relu, true}, {16, Activation::Relu, true},
                          {1, Activation::Identity, false}}, seed);
}

DenseNet fc_net(int in, int hidden, std::uint64_t seed) {
  return DenseNet(in, {{hidden, Activation::Relu, true}, {hidden, Activation::Relu, true},
                       {1, Activation::Identity, false}}, seed);
}

}  // namespace

TEST(Forward, IdentityLayer) {
  DenseNet net(3, {{3, Activation::Identity, false}}, 1);
  net.layers()[0].weight.setIdentity();
  net.layers()[0].bias.setZero();
  Eigen::MatrixXd x(3, 2);
  x << 1, -2, 3, 4, -5, 6;
  EXPECT_EQ(net.forward(x, Mode::Inference), x);
}

TEST(Forward, Relu) {
  DenseNet net(2, {{2, Activation::Relu, false}}, 1);
  net.layers()[0].weight.setIdentity();
  net.layers()[0].bias.setZero();
  Eigen::MatrixXd x(2, 1);
  x << -1, 2;
  const Eigen::MatrixXd y = net.forward(x, Mode::Inference);
  EXPECT_EQ(y(0, 0), 0.0);
  EXPECT_EQ(y(1, 0), 2.0);
}

TEST(Forward, ScaledTanhRange) {
  std::mt19937_64 rng(1);
  auto net = actor_net(4, 3);
  const Eigen::MatrixXd y = net.forward(random_matrix(4, 64, rng, 10.0), Mode::Inference);
  EXPECT_LE(y.cwiseAbs().maxCoeff(), std::numbers::pi);
}

TEST(Forward, WidthMismatch) {
  DenseNet net(3, {{2, Activation::Relu, false}}, 1);
  EXPECT_THROW(net.forward(Eigen::MatrixXd::Zero(4, 1), Mode::Inference), std::invalid_argument);
}

TEST(Forward, BatchNormRejectsSingleSample) {
  auto net = fc_net(4, 8, 2);
  EXPECT_THROW(net.forward(Eigen::MatrixXd::Zero(4, 1), Mode::Training), std::invalid_argument);
  EXPECT_NO_THROW(net.forward(Eigen::MatrixXd::Zero(4, 1), Mode::Inference));
}

TEST(Forward, InferenceIsPure) {
  std::mt19937_64 rng(4);
  auto net = critic_net(3, 5);
  const Eigen::MatrixXd x = random_matrix(6, 10, rng);
  const Eigen::MatrixXd a = net.forward(x, Mode::Inference);
  const Eigen::MatrixXd b = net.forward(x, Mode::Inference);
  EXPECT_EQ(a, b);
}

TEST(Backward, ScalarLinear) {
  DenseNet net(1, {{1, Activation::Identity, false}}, 1);
  net.layers()[0].weight(0, 0) = 0.7;
  net.layers()[0].bias[0] = 0.0;
  net.forward(Eigen::MatrixXd::Constant(1, 1, 3.0), Mode::Training);
  net.backward(Eigen::MatrixXd::Ones(1, 1));
  EXPECT_DOUBLE_EQ(net.layers()[0].grad_weight(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(net.layers()[0].grad_bias[0], 1.0);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  std::mt19937_64 rng(6);
  auto net = fc_net(5, 7, 3);
  net.forward(random_matrix(5, 9, rng), Mode::Training);
  net.backward(Eigen::MatrixXd::Zero(1, 9));
  for (const auto& g : net.gradients()) {
    for (double v : g) EXPECT_EQ(v, 0.0);
  }
}

TEST(Backward, WithoutForwardIsStateError) {
  DenseNet net(2, {{1, Activation::Identity, false}}, 1);
  EXPECT_THROW(net.backward(Eigen::MatrixXd::Ones(1, 1)), StateError);
}

TEST(GradientCheck, ActorNets) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = actor_net(1 + trial % 4, 100 + trial);
    jitter_batch_norm(net, rng);
    EXPECT_LT(check_net(net, 5, rng), 1e-4) << "trial " << trial;
  }
}

TEST(GradientCheck, CriticNets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = critic_net(1 + trial % 4, 200 + trial);
    jitter_batch_norm(net, rng);
    EXPECT_LT(check_net(net, 6, rng), 1e-4) << "trial " << trial;
  }
}

TEST(GradientCheck, FullyConnectedPredictorNets) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = fc_net(2 * (1 + trial % 4), 8 + trial % 5, 300 + trial);
    jitter_batch_norm(net, rng);
    EXPECT_LT(check_net(net, 7, rng), 1e-4) << "trial " << trial;
  }
}

TEST(GradientCheck, TanhWithoutBatchNorm) {
  std::mt19937_64 rng(13);
  DenseNet net(3, {{5, Activation::Tanh, false}, {2, Activation::Identity, false}}, 9);
  EXPECT_LT(check_net(net, 1, rng), 1e-4);
}

TEST(Mse, ValueAndGradient) {
  Eigen::MatrixXd p(1, 2), t(1, 2), g;
  p << 1.0, 3.0;
  t << 0.0, 1.0;
  EXPECT_DOUBLE_EQ(mse(p, t, &g), 2.5);
  EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(g(0, 1), 2.0);
  EXPECT_THROW(mse(p, Eigen::MatrixXd::Zero(2, 1)), std::invalid_argument);
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  std::vector<double> w{1.0, -2.0}, g{0.0, 0.0};
  Adam opt(0.1);
  for (int i = 0; i < 5; ++i) opt.step({{w.data(), 2}}, {{g.data(), 2}});
  EXPECT_EQ(w[0], 1.0);
  EXPECT_EQ(w[1], -2.0);
}

TEST(AdamTest, DescendsQuadratic) {
  std::vector<double> w{1.0}, g{2.0};
  Adam opt(0.01);
  opt.step({{w.data(), 1}}, {{g.data(), 1}});
  EXPECT_LT(w[0] * w[0], 1.0);
  // First bias-corrected step moves by exactly lr.
  EXPECT_NEAR(w[0], 0.99, 1e-9);
}

TEST(AdamTest, ShapeMismatch) {
  std::vector<double> w{1.0, 2.0}, g{1.0};
  Adam opt;
  EXPECT_THROW(opt.step({{w.data(), 2}}, {{g.data(), 1}}), std::invalid_argument);
}

TEST(Schedule, StepDecay) {
  const LrSchedule s{0.1, {2}, 0.1};
  EXPECT_DOUBLE_EQ(s.rate(0), 0.1);
  EXPECT_DOUBLE_EQ(s.rate(1), 0.1);
  EXPECT_NEAR(s.rate(2), 0.01, 1e-15);
}

TEST(Schedule, MultipleMilestones) {
  const LrSchedule s{0.01, {100, 300, 400}, 0.1};
  EXPECT_DOUBLE_EQ(s.rate(99), 0.01);
  EXPECT_NEAR(s.rate(100), 1e-3, 1e-15);
  EXPECT_NEAR(s.rate(350), 1e-4, 1e-16);
  EXPECT_NEAR(s.rate(499), 1e-5, 1e-17);
}

TEST(SoftUpdate, TauOneCopies) {
  std::mt19937_64 rng(14);
  auto a = critic_net(2, 1), b = critic_net(2, 2);
  a.forward(random_matrix(4, 8, rng), Mode::Training);
  soft_update(b, a, 1.0);
  const auto pa = a.parameters(), pb = b.parameters();
  for (std::size_t t = 0; t < pa.size(); ++t) {
    for (std::size_t i = 0; i < pa[t].size(); ++i) EXPECT_EQ(pa[t][i], pb[t][i]);
  }
  const auto ba = a.buffers(), bb = b.buffers();
  for (std::size_t t = 0; t < ba.size(); ++t) {
    for (std::size_t i = 0; i < ba[t].size(); ++i) EXPECT_EQ(ba[t][i], bb[t][i]);
  }
}

TEST(SoftUpdate, Interpolates) {
  DenseNet a(1, {{1, Activation::Identity, false}}, 1), b = a;
  a.layers()[0].weight(0, 0) = 1.0;
  b.layers()[0].weight(0, 0) = 0.0;
  soft_update(b, a, 0.25);
  EXPECT_DOUBLE_EQ(b.layers()[0].weight(0, 0), 0.25);
}

TEST(Checkpoint, BitExactRoundTrip) {
  std::mt19937_64 rng(15);
  auto net = actor_net(3, 8);
  net.forward(random_matrix(3, 16, rng), Mode::Training);
  const auto back = load_checkpoint(save_checkpoint(net));
  const auto pa = net.parameters();
  const auto pb = back.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t t = 0; t < pa.size(); ++t) {
    for (std::size_t i = 0; i < pa[t].size(); ++i) EXPECT_EQ(pa[t][i], pb[t][i]);
  }
  const Eigen::MatrixXd x = random_matrix(3, 4, rng);
  EXPECT_EQ(net.forward(x, Mode::Inference), DenseNet(back).forward(x, Mode::Inference));
}

TEST(Checkpoint, RejectsGarbage) {
  EXPECT_ANY_THROW(load_checkpoint("{\"version\": 99}"));
  EXPECT_ANY_THROW(load_checkpoint("not json"));
}
