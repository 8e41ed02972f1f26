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

struct TrainConfig;

/// Smoothness penalties; all non-negative, summed over every joint.
struct RegularizationRewards {
  double dof_velocity = 0.0;  // sum (qd_t - qd_{t+1})^2
  double energy = 0.0;        // sum |tau qd_t|
  double action_rate = 0.0;   // ||a_t - a_{t-1}||^2
  double torque = 0.0;        // sum |tau|
};

/// `torque` is the control-step torque (mean over PD substeps).
RegularizationRewards regularization_rewards(const Vec& joint_vel_t, const Vec& joint_vel_next, const Vec& torque,
                                             const Vec& action, const Vec& prev_action);

/// Penalty weights are negative, so larger penalties lower the reward.
struct RewardWeights {
  double style = 1.0;
  double dof_velocity = -1e-4;
  double energy = -2e-5;
  double action_rate = -1e-2;
  double torque = -1e-4;

  static RewardWeights from(const TrainConfig& c);
};

double total_reward(double style_reward, const RegularizationRewards& regs, const RewardWeights& w);

}  // namespace skillmix::policy
