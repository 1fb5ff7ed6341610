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

#include "nullbeam/neuralnet.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "nullbeam/errors.hpp"

namespace nullbeam::nn {

namespace {

std::span<double> view(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> view(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void activate(Eigen::MatrixXd& x, Activation a, double scale) {
  switch (a) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      x = x.cwiseMax(0.0);
      break;
    case Activation::Tanh:
      x = x.array().tanh();
      break;
    case Activation::ScaledTanh:
      x = scale * x.array().tanh();
      break;
  }
}

// Multiplies `grad` in place by the activation derivative, given the
// activation output.
void activation_backward(Eigen::MatrixXd& grad, const Eigen::MatrixXd& out,
                         Activation a, double scale) {
  switch (a) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      grad = (out.array() > 0.0).select(grad, 0.0);
      break;
    case Activation::Tanh:
      grad.array() *= 1.0 - out.array().square();
      break;
    case Activation::ScaledTanh:
      grad.array() *= scale * (1.0 - (out.array() / scale).square());
      break;
  }
}

}  // namespace

DenseNet::DenseNet(int inputs, const std::vector<LayerSpec>& specs, std::uint64_t seed)
    : inputs_(inputs) {
  if (inputs < 1 || specs.empty()) throw std::invalid_argument("empty network");
  std::mt19937_64 rng(seed);
  int fan_in = inputs;
  for (const auto& spec : specs) {
    if (spec.units < 1) throw std::invalid_argument("layer width must be >= 1");
    DenseLayer layer;
    const double bound = std::sqrt(1.0 / fan_in);
    std::uniform_real_distribution<double> u(-bound, bound);
    layer.weight.resize(spec.units, fan_in);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = u(rng);
    }
    layer.bias.resize(spec.units);
    for (auto& b : layer.bias) b = u(rng);
    layer.activation = spec.activation;
    layer.scale = spec.scale;
    layer.batch_norm = spec.batch_norm;
    if (spec.batch_norm) {
      layer.gamma = Eigen::VectorXd::Ones(spec.units);
      layer.beta = Eigen::VectorXd::Zero(spec.units);
      layer.running_mean = Eigen::VectorXd::Zero(spec.units);
      layer.running_var = Eigen::VectorXd::Ones(spec.units);
    }
    layer.grad_weight = Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols());
    layer.grad_bias = Eigen::VectorXd::Zero(spec.units);
    layer.grad_gamma = Eigen::VectorXd::Zero(layer.gamma.size());
    layer.grad_beta = Eigen::VectorXd::Zero(layer.beta.size());
    layers_.push_back(std::move(layer));
    fan_in = spec.units;
  }
}

int DenseNet::outputs() const noexcept {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& batch, Mode mode) {
  if (batch.rows() != inputs_) {
    throw std::invalid_argument("input width " + std::to_string(batch.rows()) +
                                " does not match network input " + std::to_string(inputs_));
  }
  const Eigen::Index n = batch.cols();
  if (n < 1) throw std::invalid_argument("empty batch");
  Eigen::MatrixXd x = batch;
  for (auto& layer : layers_) {
    layer.input = std::move(x);
    Eigen::MatrixXd z(layer.weight.rows(), n);
    z.noalias() = layer.weight * layer.input;
    z.colwise() += layer.bias;
    if (layer.batch_norm) {
      if (mode == Mode::Training) {
        if (n < 2) {
          throw std::invalid_argument("batch-norm needs a batch of at least 2 in training mode");
        }
        const Eigen::VectorXd mean = z.rowwise().mean();
        z.colwise() -= mean;
        const Eigen::VectorXd var = z.array().square().rowwise().mean();
        layer.inv_std = (var.array() + kBatchNormEps).rsqrt();
        const double unbias = static_cast<double>(n) / static_cast<double>(n - 1);
        layer.running_mean = kBatchNormMomentum * layer.running_mean + (1.0 - kBatchNormMomentum) * mean;
        layer.running_var =
            kBatchNormMomentum * layer.running_var + (1.0 - kBatchNormMomentum) * unbias * var;
      } else {
        z.colwise() -= layer.running_mean;
        layer.inv_std = (layer.running_var.array() + kBatchNormEps).rsqrt();
      }
      z.array().colwise() *= layer.inv_std.array();
      layer.normalized = z;
      z.array().colwise() *= layer.gamma.array();
      z.colwise() += layer.beta;
    }
    activate(z, layer.activation, layer.scale);
    layer.output = z;
    x = std::move(z);
  }
  cached_ = true;
  cached_mode_ = mode;
  return x;
}

Eigen::MatrixXd DenseNet::backward(const Eigen::MatrixXd& grad_output) {
  if (!cached_) throw StateError("backward called without a cached forward pass");
  if (grad_output.rows() != outputs() || grad_output.cols() != layers_.back().output.cols()) {
    throw std::invalid_argument("gradient shape does not match the last forward output");
  }
  Eigen::MatrixXd g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    auto& layer = *it;
    activation_backward(g, layer.output, layer.activation, layer.scale);
    if (layer.batch_norm) {
      layer.grad_gamma = (g.array() * layer.normalized.array()).rowwise().sum();
      layer.grad_beta = g.rowwise().sum();
      g.array().colwise() *= layer.gamma.array();  // d/d normalized
      if (cached_mode_ == Mode::Training) {
        const double n = static_cast<double>(g.cols());
        const Eigen::VectorXd sum_g = g.rowwise().sum();
        const Eigen::VectorXd sum_gx = (g.array() * layer.normalized.array()).rowwise().sum();
        Eigen::MatrixXd centered = g * n;
        centered.colwise() -= sum_g;
        centered.array() -= layer.normalized.array().colwise() * sum_gx.array();
        g = centered.array().colwise() * (layer.inv_std.array() / n);
      } else {
        g.array().colwise() *= layer.inv_std.array();
      }
    }
    layer.grad_weight.noalias() = g * layer.input.transpose();
    layer.grad_bias = g.rowwise().sum();
    Eigen::MatrixXd upstream(layer.weight.cols(), g.cols());
    upstream.noalias() = layer.weight.transpose() * g;
    g = std::move(upstream);
  }
  cached_ = false;
  return g;
}

std::vector<std::span<double>> DenseNet::parameters() {
  std::vector<std::span<double>> out;
  for (auto& l : layers_) {
    out.push_back(view(l.weight));
    out.push_back(view(l.bias));
    if (l.batch_norm) {
      out.push_back(view(l.gamma));
      out.push_back(view(l.beta));
    }
  }
  return out;
}

std::vector<std::span<const double>> DenseNet::parameters() const {
  std::vector<std::span<const double>> out;
  for (const auto& l : layers_) {
    out.push_back(view(l.weight));
    out.push_back(view(l.bias));
    if (l.batch_norm) {
      out.push_back(view(l.gamma));
      out.push_back(view(l.beta));
    }
  }
  return out;
}

std::vector<std::span<const double>> DenseNet::gradients() const {
  std::vector<std::span<const double>> out;
  for (const auto& l : layers_) {
    out.push_back(view(l.grad_weight));
    out.push_back(view(l.grad_bias));
    if (l.batch_norm) {
      out.push_back(view(l.grad_gamma));
      out.push_back(view(l.grad_beta));
    }
  }
  return out;
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.size();
  return n;
}

std::vector<std::span<double>> DenseNet::buffers() {
  std::vector<std::span<double>> out;
  for (auto& l : layers_) {
    if (!l.batch_norm) continue;
    out.push_back(view(l.running_mean));
    out.push_back(view(l.running_var));
  }
  return out;
}

std::vector<std::span<const double>> DenseNet::buffers() const {
  std::vector<std::span<const double>> out;
  for (const auto& l : layers_) {
    if (!l.batch_norm) continue;
    out.push_back(view(l.running_mean));
    out.push_back(view(l.running_var));
  }
  return out;
}

void soft_update(DenseNet& target, const DenseNet& source, double tau) {
  auto blend = [tau](const std::vector<std::span<double>>& dst,
                     const std::vector<std::span<const double>>& src) {
    if (dst.size() != src.size()) throw std::invalid_argument("network shapes differ");
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (dst[i].size() != src[i].size()) throw std::invalid_argument("network shapes differ");
      for (std::size_t j = 0; j < dst[i].size(); ++j) {
        dst[i][j] = tau * src[i][j] + (1.0 - tau) * dst[i][j];
      }
    }
  };
  blend(target.parameters(), source.parameters());
  blend(target.buffers(), source.buffers());
}

double LrSchedule::rate(int epoch) const {
  double lr = initial;
  for (int m : milestones) {
    if (m <= epoch) lr *= factor;
  }
  return lr;
}

Adam::Adam(double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(const std::vector<std::span<double>>& params,
                const std::vector<std::span<const double>>& grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam: parameter/gradient count mismatch");
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("adam: parameter set changed shape");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size() || params[i].size() != m_[i].size()) {
      throw std::invalid_argument("adam: tensor shape mismatch");
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ / c1;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < params[i].size(); ++j) {
      const double g = grads[i][j];
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
      params[i][j] -= step * m[j] / (std::sqrt(v[j] / c2) + eps_);
    }
  }
}

double mse(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target,
           Eigen::MatrixXd* grad) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols()) {
    throw std::invalid_argument("mse: shape mismatch");
  }
  const Eigen::MatrixXd diff = prediction - target;
  const double n = static_cast<double>(diff.size());
  if (grad) *grad = diff * (2.0 / n);
  return diff.squaredNorm() / n;
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::ScaledTanh: return "scaled_tanh";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "scaled_tanh") return Activation::ScaledTanh;
  throw std::invalid_argument("unknown activation: " + s);
}

namespace {

nlohmann::json row_major(const Eigen::MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

nlohmann::json as_array(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd read_vector(const nlohmann::json& j, Eigen::Index n) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != n) {
    throw std::invalid_argument("checkpoint tensor has the wrong length");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), n);
}

}  // namespace

std::string save_checkpoint(const DenseNet& net) {
  nlohmann::json doc;
  doc["format"] = "nullbeam-densenet";
  doc["version"] = 1;
  doc["inputs"] = net.inputs();
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.layers()) {
    nlohmann::json jl;
    jl["rows"] = l.weight.rows();
    jl["cols"] = l.weight.cols();
    jl["activation"] = to_string(l.activation);
    jl["scale"] = l.scale;
    jl["batch_norm"] = l.batch_norm;
    jl["weight"] = row_major(l.weight);
    jl["bias"] = as_array(l.bias);
    if (l.batch_norm) {
      jl["gamma"] = as_array(l.gamma);
      jl["beta"] = as_array(l.beta);
      jl["running_mean"] = as_array(l.running_mean);
      jl["running_var"] = as_array(l.running_var);
    }
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  return doc.dump();
}

DenseNet load_checkpoint(const std::string& blob) {
  const auto doc = nlohmann::json::parse(blob);
  if (doc.value("format", "") != "nullbeam-densenet" || doc.value("version", 0) != 1) {
    throw std::invalid_argument("unsupported checkpoint format");
  }
  std::vector<LayerSpec> specs;
  for (const auto& jl : doc.at("layers")) {
    specs.push_back(LayerSpec{jl.at("rows").get<int>(),
                              activation_from_string(jl.at("activation").get<std::string>()),
                              jl.at("batch_norm").get<bool>(), jl.at("scale").get<double>()});
  }
  DenseNet net(doc.at("inputs").get<int>(), specs, 0);
  std::size_t i = 0;
  for (const auto& jl : doc.at("layers")) {
    auto& l = net.layers()[i++];
    const auto w = jl.at("weight").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != l.weight.size() ||
        jl.at("cols").get<Eigen::Index>() != l.weight.cols()) {
      throw std::invalid_argument("checkpoint layer shapes do not chain");
    }
    l.weight = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        w.data(), l.weight.rows(), l.weight.cols());
    l.bias = read_vector(jl.at("bias"), l.bias.size());
    if (l.batch_norm) {
      l.gamma = read_vector(jl.at("gamma"), l.gamma.size());
      l.beta = read_vector(jl.at("beta"), l.beta.size());
      l.running_mean = read_vector(jl.at("running_mean"), l.running_mean.size());
      l.running_var = read_vector(jl.at("running_var"), l.running_var.size());
    }
  }
  return net;
}

}  // namespace nullbeam::nn
