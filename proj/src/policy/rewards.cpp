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

#include "skillmix/policy/rewards.hpp"

#include "skillmix/policy/config.hpp"

namespace skillmix::policy {

RegularizationRewards regularization_rewards(const Vec& joint_vel_t, const Vec& joint_vel_next, const Vec& torque,
                                             const Vec& action, const Vec& prev_action) {
  RegularizationRewards r;
  r.dof_velocity = (joint_vel_t - joint_vel_next).squaredNorm();
  r.energy = torque.cwiseProduct(joint_vel_t).cwiseAbs().sum();
  r.action_rate = (action - prev_action).squaredNorm();
  r.torque = torque.cwiseAbs().sum();
  return r;
}

RewardWeights RewardWeights::from(const TrainConfig& c) {
  return {c.style_reward_weight, c.dof_velocity_penalty_weight, c.energy_penalty_weight, c.action_rate_penalty_weight,
          c.torque_penalty_weight};
}

double total_reward(double style_reward, const RegularizationRewards& regs, const RewardWeights& w) {
  return w.style * style_reward + w.dof_velocity * regs.dof_velocity + w.energy * regs.energy +
         w.action_rate * regs.action_rate + w.torque * regs.torque;
}

}  // namespace skillmix::policy
