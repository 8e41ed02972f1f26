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

#include "skillmix/nn/mlp.hpp"

namespace skillmix::nn {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators mirroring a parameter set.
struct OptimizerState {
  AdamConfig config;
  NetworkParameters first_moment;
  NetworkParameters second_moment;
  long step = 0;

  static OptimizerState for_params(const NetworkParameters& params, AdamConfig config);
};

/// One bias-corrected Adam update in place. Throws on non-finite gradients.
void adam_step(NetworkParameters& params, const NetworkParameters& grads, OptimizerState& state);

/// Adam for a loose parameter vector (e.g. a log standard deviation).
struct VectorAdam {
  AdamConfig config;
  Vec first_moment;
  Vec second_moment;
  long step = 0;

  VectorAdam() = default;
  VectorAdam(Eigen::Index n, AdamConfig c)
      : config(c), first_moment(Vec::Zero(n)), second_moment(Vec::Zero(n)) {}

  void apply(Vec& params, const Vec& grads);
};

}  // namespace skillmix::nn
