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

#include <filesystem>
#include <vector>

#include "skillmix/nn/checkpoint.hpp"
#include "skillmix/nn/gaussian.hpp"
#include "skillmix/nn/mlp.hpp"
#include "skillmix/sim/skills.hpp"

namespace skillmix::policy {

struct ActorCriticShape {
  int base_obs_dim = 16;  // observation without the latent
  int action_dim = 4;
  int num_skills = 4;
  int latent_dim = 8;
  std::vector<int> policy_hidden{128, 64};
  std::vector<int> value_hidden{128, 64};
  std::vector<int> encoder_hidden{64, 64};
  double init_log_std = -1.0;
};

/// Conditional Gaussian policy, value function, and the skill-label encoder
/// feeding the latent z into both.
struct ActorCritic {
  nn::Mlp policy;   // [base_obs ; z] -> action mean
  nn::Mlp value;    // [base_obs ; z] -> scalar
  nn::Mlp encoder;  // onehot(skill) -> z
  Vec log_std;
  int num_skills = 0;
  int latent_dim = 0;

  ActorCritic() = default;
  ActorCritic(const ActorCriticShape& shape, uint64_t seed);

  int base_obs_dim() const { return policy.spec().input_size() - latent_dim; }
  int action_dim() const { return policy.spec().output_size(); }

  Mat onehot(const std::vector<int>& skills) const;
  Vec encode(int skill_id) const;
  Mat encode_batch(const std::vector<int>& skills) const;
  /// Stacks base observations over latents, column-wise.
  static Mat join(const Mat& base_obs, const Mat& z);

  Mat action_mean(const Mat& base_obs, const Mat& z) const;
  Vec values(const Mat& base_obs, const Mat& z) const;

  bool operator==(const ActorCritic& o) const;
};

/// z = encoder(onehot(skill_id)).
Vec encode_condition(const ActorCritic& ac, int skill_id);

struct CheckpointSet {
  ActorCritic actor_critic;
  std::vector<sim::SkillLabel> skills;
  nlohmann::json extra = nlohmann::json::object();
};

/// Writes policy.json, value.json, encoder.json and meta.json into `dir`.
void save_actor_critic(const CheckpointSet& set, const std::filesystem::path& dir);
CheckpointSet load_actor_critic(const std::filesystem::path& dir);

}  // namespace skillmix::policy
