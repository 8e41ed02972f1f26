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

#include <vector>

#include "skillmix/nn/adam.hpp"
#include "skillmix/policy/actor_critic.hpp"
#include "skillmix/policy/gae.hpp"

namespace skillmix::policy {

/// Rollout storage for E environment instances over H steps. Step (e, t) is
/// column e * H + t.
struct RolloutBuffer {
  int envs = 0;
  int horizon = 0;
  Mat base_obs;  // observation without z
  std::vector<int> skills;
  Mat z;
  Mat actions;
  Vec log_probs;
  Vec values;
  Vec rewards;
  Vec style;         // r_s
  Vec dof_velocity;  // r_v
  Vec energy;        // r_ep
  Vec action_rate;   // r_a
  Vec torque;        // r_t
  Vec dones;
  Vec bootstrap_values;  // V(s_H) per environment

  RolloutBuffer() = default;
  RolloutBuffer(int envs, int horizon, int obs_dim, int latent_dim, int action_dim);

  int size() const { return envs * horizon; }
  int index(int env, int t) const { return env * horizon + t; }
  void validate() const;
  bool operator==(const RolloutBuffer& o) const;
};

struct PpoSettings {
  double clip = 0.2;
  double gamma = 0.95;
  double lambda = 0.95;
  int epochs = 3;
  int minibatch_size = 512;
  double value_loss_coef = 0.5;
  bool normalize_advantages = true;
};

struct PpoOptimizers {
  nn::OptimizerState policy;
  nn::OptimizerState value;
  nn::OptimizerState encoder;
  nn::VectorAdam log_std;

  static PpoOptimizers for_model(const ActorCritic& ac, nn::AdamConfig config);
};

struct PpoStats {
  double policy_loss = 0.0;  // surrogate of the first minibatch
  double value_loss = 0.0;
  double max_first_ratio_deviation = 0.0;  // max |ratio - 1| at epoch 0, minibatch 0
  int skipped_minibatches = 0;
  int minibatches = 0;
};

/// Advantages and returns for the whole buffer, GAE per environment row.
AdvantageResult buffer_advantages(const RolloutBuffer& buffer, double gamma, double lambda);

/// Clipped surrogate and its gradient w.r.t. each sample's log-probability.
struct SurrogateTerms {
  double loss = 0.0;
  Vec d_log_prob;
};
SurrogateTerms clipped_surrogate(const Vec& ratio, const Vec& advantages, double clip);

/// Minibatched PPO epochs over the buffer. Gradients reach the encoder
/// through z from both the surrogate and the value loss.
PpoStats ppo_update(ActorCritic& ac, PpoOptimizers& opt, const RolloutBuffer& buffer, const PpoSettings& settings,
                    Rng& rng);

}  // namespace skillmix::policy
