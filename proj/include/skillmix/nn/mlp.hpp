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

#pragma once

#include <string>
#include <vector>

#include "skillmix/common.hpp"

namespace skillmix::nn {

enum class Activation { relu, tanh };
enum class OutputActivation { linear, sigmoid };

std::string to_string(Activation a);
std::string to_string(OutputActivation a);
Activation parse_activation(const std::string& s);
OutputActivation parse_output_activation(const std::string& s);

struct NetworkSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Activation hidden_activation = Activation::relu;
  OutputActivation output_activation = OutputActivation::linear;
  uint64_t seed = 0;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// Weights and biases of a dense network, layer by layer.
struct NetworkParameters {
  std::vector<Mat> weights;  // weights[l] is (out_l x in_l)
  std::vector<Vec> biases;

  /// Same shapes, all zeros.
  NetworkParameters zeros_like() const;
  size_t count() const;
  bool finite() const;

  /// Flattened view in canonical order (W0 row-major, b0, W1, b1, ...).
  Vec flatten() const;
  void unflatten(const Vec& flat);

  NetworkParameters& operator+=(const NetworkParameters& o);
  NetworkParameters& operator*=(double s);
  bool operator==(const NetworkParameters&) const = default;
};

/// Activations recorded by a batched forward pass. Columns are samples.
struct ForwardCache {
  std::vector<Mat> inputs;  // inputs[l] feeds layer l
  std::vector<Mat> pre;     // pre-activations of layer l
  Mat output;
};

struct BackwardResult {
  NetworkParameters grads;
  Mat input_grad;
};

struct PenaltyResult {
  double value = 0.0;
  NetworkParameters grads;
};

class Mlp {
 public:
  Mlp() = default;
  /// Initializes weights with a scaled uniform (Glorot) draw from spec.seed.
  explicit Mlp(NetworkSpec spec);
  Mlp(NetworkSpec spec, NetworkParameters params);

  const NetworkSpec& spec() const { return spec_; }
  const NetworkParameters& params() const { return params_; }
  NetworkParameters& params() { return params_; }

  Vec forward(const Vec& x) const;
  Mat forward_batch(const Mat& x) const;
  ForwardCache forward_cached(const Mat& x) const;

  /// Gradients of sum_i <grad_output_i, output_i> w.r.t. parameters and input.
  BackwardResult backward(const ForwardCache& cache, const Mat& grad_output) const;

  /// Sum over batch columns of ||M * dD/dx||^2, where `input_mask` selects the
  /// differentiated input slots, plus its exact parameter gradient
  /// (double backprop). Requires a scalar output and tanh hidden layers.
  PenaltyResult grad_penalty(const Mat& x, const Vec& input_mask) const;

 private:
  NetworkSpec spec_;
  NetworkParameters params_;
};

}  // namespace skillmix::nn
