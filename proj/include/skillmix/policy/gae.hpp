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

namespace skillmix::policy {

struct AdvantageResult {
  Vec advantages;
  Vec returns;
};

/// Generalized advantage estimation over one time-ordered sequence.
/// `values` has one more entry than `rewards`: the bootstrap value of the
/// state after the last step. dones[t] != 0 cuts the recursion after step t.
AdvantageResult gae_advantages(const Vec& rewards, const Vec& values, const Vec& dones, double gamma, double lambda);

/// Zero mean, unit standard deviation (no-op for constant inputs).
Vec normalize(const Vec& v);

}  // namespace skillmix::policy
