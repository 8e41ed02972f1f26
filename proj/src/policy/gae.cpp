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

#include "skillmix/policy/gae.hpp"

#include <cmath>

namespace skillmix::policy {

AdvantageResult gae_advantages(const Vec& rewards, const Vec& values, const Vec& dones, double gamma, double lambda) {
  const Eigen::Index T = rewards.size();
  require(values.size() == T + 1 && dones.size() == T, "shape_mismatch",
          "gae: values must have T+1 entries and dones T entries");
  AdvantageResult r{Vec::Zero(T), Vec::Zero(T)};
  double next_adv = 0.0;
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const double live = dones[t] != 0.0 ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * values[t + 1] * live - values[t];
    next_adv = delta + gamma * lambda * live * next_adv;
    r.advantages[t] = next_adv;
  }
  r.returns = r.advantages + values.head(T);
  return r;
}

Vec normalize(const Vec& v) {
  if (v.size() < 2) return v;
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().mean());
  if (sd < 1e-12) return (v.array() - mean).matrix();
  return ((v.array() - mean) / (sd + 1e-8)).matrix();
}

}  // namespace skillmix::policy
