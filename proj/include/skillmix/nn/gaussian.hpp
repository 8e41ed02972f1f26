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

#include "skillmix/common.hpp"

namespace skillmix::nn {

inline constexpr double kLogStdMin = -4.0;
inline constexpr double kLogStdMax = 1.0;

Vec clamp_log_std(const Vec& log_std);

/// Diagonal Gaussian policy head with a state-independent log standard deviation.
struct GaussianSample {
  Vec action;
  double log_prob = 0.0;
};

GaussianSample gaussian_sample(const Vec& mean, const Vec& log_std, Rng& rng);
double gaussian_log_prob(const Vec& action, const Vec& mean, const Vec& log_std);

/// d log p / d mean and d log p / d log_std (before clamping).
struct GaussianGrad {
  Vec d_mean;
  Vec d_log_std;
};
GaussianGrad gaussian_log_prob_grad(const Vec& action, const Vec& mean, const Vec& log_std);

}  // namespace skillmix::nn
