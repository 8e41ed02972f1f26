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

#include "skillmix/nn/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace skillmix::nn {

Vec clamp_log_std(const Vec& log_std) { return log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax); }

GaussianSample gaussian_sample(const Vec& mean, const Vec& log_std, Rng& rng) {
  require(mean.size() == log_std.size(), "shape_mismatch", "mean and log_std differ in length");
  const Vec ls = clamp_log_std(log_std);
  std::normal_distribution<double> normal(0.0, 1.0);
  GaussianSample s;
  s.action.resize(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) s.action[i] = mean[i] + std::exp(ls[i]) * normal(rng);
  s.log_prob = gaussian_log_prob(s.action, mean, log_std);
  return s;
}

double gaussian_log_prob(const Vec& action, const Vec& mean, const Vec& log_std) {
  require(action.size() == mean.size() && mean.size() == log_std.size(), "shape_mismatch",
          "gaussian_log_prob argument lengths differ");
  const Vec ls = clamp_log_std(log_std);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-ls[i]);
    lp += -0.5 * z * z - ls[i] - half_log_2pi;
  }
  return lp;
}

GaussianGrad gaussian_log_prob_grad(const Vec& action, const Vec& mean, const Vec& log_std) {
  const Vec ls = clamp_log_std(log_std);
  GaussianGrad g;
  g.d_mean.resize(mean.size());
  g.d_log_std.resize(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double inv_var = std::exp(-2.0 * ls[i]);
    const double diff = action[i] - mean[i];
    g.d_mean[i] = diff * inv_var;
    // coordinates outside the clamp range do not move
    const bool active = log_std[i] >= kLogStdMin && log_std[i] <= kLogStdMax;
    g.d_log_std[i] = active ? diff * diff * inv_var - 1.0 : 0.0;
  }
  return g;
}

}  // namespace skillmix::nn
