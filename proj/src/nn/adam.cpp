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

#include "skillmix/nn/adam.hpp"

#include <cmath>

namespace skillmix::nn {

namespace {

template <typename P, typename G, typename M>
void update(P&& p, const G& g, M& m, M& v, const AdamConfig& c, double corr1, double corr2) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
  p.array() -= c.learning_rate * (m.array() / corr1) / ((v.array() / corr2).sqrt() + c.epsilon);
}

}  // namespace

OptimizerState OptimizerState::for_params(const NetworkParameters& params, AdamConfig config) {
  OptimizerState s;
  s.config = config;
  s.first_moment = params.zeros_like();
  s.second_moment = params.zeros_like();
  return s;
}

void adam_step(NetworkParameters& params, const NetworkParameters& grads, OptimizerState& state) {
  require(grads.weights.size() == params.weights.size(), "shape_mismatch", "gradient layer count mismatch");
  require(grads.finite(), "non_finite_gradient", "adam_step received non-finite gradients");
  ++state.step;
  const double corr1 = 1.0 - std::pow(state.config.beta1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(state.config.beta2, static_cast<double>(state.step));
  for (size_t l = 0; l < params.weights.size(); ++l) {
    require(grads.weights[l].rows() == params.weights[l].rows() && grads.weights[l].cols() == params.weights[l].cols(),
            "shape_mismatch", "gradient shape mismatch");
    update(params.weights[l], grads.weights[l], state.first_moment.weights[l], state.second_moment.weights[l],
           state.config, corr1, corr2);
    update(params.biases[l], grads.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
           state.config, corr1, corr2);
  }
}

void VectorAdam::apply(Vec& params, const Vec& grads) {
  require(grads.size() == params.size(), "shape_mismatch", "gradient length mismatch");
  require(grads.allFinite(), "non_finite_gradient", "adam received non-finite gradients");
  ++step;
  const double corr1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double corr2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  update(params, grads, first_moment, second_moment, config, corr1, corr2);
}

}  // namespace skillmix::nn
