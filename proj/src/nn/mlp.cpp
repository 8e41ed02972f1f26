// Copyright 2026 The skillmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skillmix/nn/mlp.hpp"

#include <cmath>

namespace skillmix::nn {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }
std::string to_string(OutputActivation a) { return a == OutputActivation::linear ? "linear" : "sigmoid"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu" || s == "rectifier") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  throw Error("invalid_argument", "unknown activation '" + s + "'");
}

OutputActivation parse_output_activation(const std::string& s) {
  if (s == "linear") return OutputActivation::linear;
  if (s == "sigmoid") return OutputActivation::sigmoid;
  throw Error("invalid_argument", "unknown output activation '" + s + "'");
}

void NetworkSpec::validate() const {
  require(layer_sizes.size() >= 2, "invalid_spec", "network needs an input and an output size");
  for (int s : layer_sizes) require(s > 0, "invalid_spec", "layer sizes must be positive");
}

NetworkParameters NetworkParameters::zeros_like() const {
  NetworkParameters z;
  for (const auto& w : weights) z.weights.push_back(Mat::Zero(w.rows(), w.cols()));
  for (const auto& b : biases) z.biases.push_back(Vec::Zero(b.size()));
  return z;
}

size_t NetworkParameters::count() const {
  size_t n = 0;
  for (size_t l = 0; l < weights.size(); ++l) n += static_cast<size_t>(weights[l].size() + biases[l].size());
  return n;
}

bool NetworkParameters::finite() const {
  for (size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

Vec NetworkParameters::flatten() const {
  Vec flat(static_cast<Eigen::Index>(count()));
  Eigen::Index k = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    const Mat& w = weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat[k++] = w(r, c);
    flat.segment(k, biases[l].size()) = biases[l];
    k += biases[l].size();
  }
  return flat;
}

void NetworkParameters::unflatten(const Vec& flat) {
  require(static_cast<size_t>(flat.size()) == count(), "shape_mismatch", "flat parameter vector has wrong length");
  Eigen::Index k = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    Mat& w = weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[k++];
    biases[l] = flat.segment(k, biases[l].size());
    k += biases[l].size();
  }
}

NetworkParameters& NetworkParameters::operator+=(const NetworkParameters& o) {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l] += o.weights[l];
    biases[l] += o.biases[l];
  }
  return *this;
}

NetworkParameters& NetworkParameters::operator*=(double s) {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l] *= s;
    biases[l] *= s;
  }
  return *this;
}

namespace {

Mat hidden(Activation a, const Mat& z) {
  if (a == Activation::tanh) return z.array().tanh().matrix();
  return z.cwiseMax(0.0);
}

// derivative expressed through the pre-activation z and the output y
Mat hidden_d1(Activation a, const Mat& z, const Mat& y) {
  if (a == Activation::tanh) return (1.0 - y.array().square()).matrix();
  return (z.array() > 0.0).cast<double>().matrix();
}

Mat sigmoid(const Mat& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

Mat head(OutputActivation a, const Mat& z) { return a == OutputActivation::sigmoid ? sigmoid(z) : z; }

Mat head_d1(OutputActivation a, const Mat& z) {
  if (a == OutputActivation::linear) return Mat::Ones(z.rows(), z.cols());
  const Mat s = sigmoid(z);
  return (s.array() * (1.0 - s.array())).matrix();
}

Mat head_d2(OutputActivation a, const Mat& z) {
  if (a == OutputActivation::linear) return Mat::Zero(z.rows(), z.cols());
  const Mat s = sigmoid(z);
  return (s.array() * (1.0 - s.array()) * (1.0 - 2.0 * s.array())).matrix();
}

}  // namespace

Mlp::Mlp(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  Rng rng(spec_.seed);
  for (int l = 0; l < spec_.num_layers(); ++l) {
    const int in = spec_.layer_sizes[static_cast<size_t>(l)];
    const int out = spec_.layer_sizes[static_cast<size_t>(l) + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> u(-limit, limit);
    Mat w(out, in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = u(rng);
    params_.weights.push_back(std::move(w));
    params_.biases.push_back(Vec::Zero(out));
  }
}

Mlp::Mlp(NetworkSpec spec, NetworkParameters params) : spec_(std::move(spec)), params_(std::move(params)) {
  spec_.validate();
  require(static_cast<int>(params_.weights.size()) == spec_.num_layers() &&
              params_.biases.size() == params_.weights.size(),
          "shape_mismatch", "parameter layer count does not match spec");
  for (int l = 0; l < spec_.num_layers(); ++l) {
    const auto& w = params_.weights[static_cast<size_t>(l)];
    require(w.cols() == spec_.layer_sizes[static_cast<size_t>(l)] &&
                w.rows() == spec_.layer_sizes[static_cast<size_t>(l) + 1] &&
                params_.biases[static_cast<size_t>(l)].size() == w.rows(),
            "shape_mismatch", "parameter shape does not match spec at layer " + std::to_string(l));
  }
}

Vec Mlp::forward(const Vec& x) const { return forward_batch(x); }

Mat Mlp::forward_batch(const Mat& x) const {
  require(x.rows() == spec_.input_size(), "shape_mismatch",
          "input size " + std::to_string(x.rows()) + " != " + std::to_string(spec_.input_size()));
  const int L = spec_.num_layers();
  Mat a = x;
  for (int l = 0; l < L; ++l) {
    Mat z = params_.weights[static_cast<size_t>(l)] * a;
    z.colwise() += params_.biases[static_cast<size_t>(l)];
    a = l + 1 < L ? hidden(spec_.hidden_activation, z) : head(spec_.output_activation, z);
  }
  return a;
}

ForwardCache Mlp::forward_cached(const Mat& x) const {
  require(x.rows() == spec_.input_size(), "shape_mismatch",
          "input size " + std::to_string(x.rows()) + " != " + std::to_string(spec_.input_size()));
  const int L = spec_.num_layers();
  ForwardCache c;
  c.inputs.reserve(static_cast<size_t>(L));
  c.pre.reserve(static_cast<size_t>(L));
  c.inputs.push_back(x);
  for (int l = 0; l < L; ++l) {
    Mat z = params_.weights[static_cast<size_t>(l)] * c.inputs.back();
    z.colwise() += params_.biases[static_cast<size_t>(l)];
    c.pre.push_back(std::move(z));
    if (l + 1 < L) {
      c.inputs.push_back(hidden(spec_.hidden_activation, c.pre.back()));
    } else {
      c.output = head(spec_.output_activation, c.pre.back());
    }
  }
  return c;
}

BackwardResult Mlp::backward(const ForwardCache& cache, const Mat& grad_output) const {
  const int L = spec_.num_layers();
  require(grad_output.rows() == spec_.output_size() && grad_output.cols() == cache.output.cols(), "shape_mismatch",
          "grad_output shape does not match forward output");
  BackwardResult r;
  r.grads = params_.zeros_like();
  Mat delta = (grad_output.array() * head_d1(spec_.output_activation, cache.pre.back()).array()).matrix();
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<size_t>(l);
    r.grads.weights[ul].noalias() = delta * cache.inputs[ul].transpose();
    r.grads.biases[ul] = delta.rowwise().sum();
    Mat up = params_.weights[ul].transpose() * delta;
    if (l == 0) {
      r.input_grad = std::move(up);
    } else {
      delta = (up.array() * hidden_d1(spec_.hidden_activation, cache.pre[ul - 1], cache.inputs[ul]).array()).matrix();
    }
  }
  return r;
}

PenaltyResult Mlp::grad_penalty(const Mat& x, const Vec& input_mask) const {
  require(spec_.output_size() == 1, "unsupported_for_penalty", "gradient penalty needs a scalar output");
  require(spec_.num_layers() == 1 || spec_.hidden_activation == Activation::tanh, "unsupported_for_penalty",
          "gradient penalty needs twice-differentiable (tanh) hidden layers");
  require(input_mask.size() == spec_.input_size(), "shape_mismatch", "mask length != input size");

  const int L = spec_.num_layers();
  const auto& W = params_.weights;
  const ForwardCache c = forward_cached(x);
  const OutputActivation out_act = spec_.output_activation;

  // first-order backward: u[l] = dD/dz_l, v[l] = dD/da_{l+1}
  std::vector<Mat> u(static_cast<size_t>(L)), v(static_cast<size_t>(L));
  u[static_cast<size_t>(L - 1)] = head_d1(out_act, c.pre.back());
  for (int l = L - 2; l >= 0; --l) {
    const auto ul = static_cast<size_t>(l);
    v[ul] = W[ul + 1].transpose() * u[ul + 1];
    u[ul] = (v[ul].array() * (1.0 - c.inputs[ul + 1].array().square())).matrix();
  }
  const Mat g = W[0].transpose() * u[0];
  const Mat masked = (g.array().colwise() * input_mask.array()).matrix();

  PenaltyResult res;
  res.value = masked.squaredNorm();
  res.grads = params_.zeros_like();

  // reverse pass over the gradient computation
  const Mat g_bar = 2.0 * (masked.array().colwise() * input_mask.array()).matrix();
  res.grads.weights[0] += u[0] * g_bar.transpose();
  Mat u_bar = W[0] * g_bar;
  std::vector<Mat> z_direct(static_cast<size_t>(L));
  for (int l = 0; l + 1 < L; ++l) {
    const auto ul = static_cast<size_t>(l);
    const auto t = c.inputs[ul + 1].array();
    const Mat d1 = (1.0 - t.square()).matrix();
    const Mat d2 = (-2.0 * t * (1.0 - t.square())).matrix();
    const Mat v_bar = (u_bar.array() * d1.array()).matrix();
    z_direct[ul] = (u_bar.array() * v[ul].array() * d2.array()).matrix();
    res.grads.weights[ul + 1] += u[ul + 1] * v_bar.transpose();
    u_bar = W[ul + 1] * v_bar;
  }
  z_direct[static_cast<size_t>(L - 1)] = (u_bar.array() * head_d2(out_act, c.pre.back()).array()).matrix();

  // reverse pass over the forward computation with injected pre-activation grads
  Mat z_bar = z_direct[static_cast<size_t>(L - 1)];
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<size_t>(l);
    res.grads.weights[ul] += z_bar * c.inputs[ul].transpose();
    res.grads.biases[ul] += z_bar.rowwise().sum();
    if (l > 0) {
      const Mat a_bar = W[ul].transpose() * z_bar;
      z_bar = (a_bar.array() * (1.0 - c.inputs[ul].array().square())).matrix() + z_direct[ul - 1];
    }
  }
  return res;
}

}  // namespace skillmix::nn
