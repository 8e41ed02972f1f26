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
#include <string>
#include <vector>

#include "skillmix/disc/discriminator.hpp"
#include "skillmix/sim/dataset.hpp"

namespace skillmix::policy {

/// Every training knob. The hyperparameter-table keys keep their published
/// names; desk-scale defaults are active where the published value targets
/// thousands of parallel environments.
struct TrainConfig {
  // hyperparameter table
  double style_reward_weight = 1.0;
  double conditional_imitation_loss_weight = 1.0;
  double condition_aware_loss_weight = 1.0;
  double weight_decay_loss_weight = 1e-4;
  double gradient_penalty_weight = 5.0;
  double dof_velocity_penalty_weight = -1e-4;
  double action_rate_penalty_weight = -1e-2;
  double energy_penalty_weight = -2e-5;
  double torque_penalty_weight = -1e-4;
  double adjust_ratio = 0.5;  // accepted, unused
  int discriminator_batch_size = 128;
  int minibatch_size = 512;
  double learning_rate = 3e-4;
  double discount = 0.95;
  int replay_buffer_size = 100000;
  double ppo_clip = 0.2;
  double gae = 0.95;

  // desk scale
  int env_count = 64;
  int horizon = 32;
  long total_steps = 500000;
  uint64_t seed = 1;
  std::vector<int> policy_hidden{128, 64};
  std::vector<int> value_hidden{128, 64};
  std::vector<int> disc_hidden{128, 64};
  std::vector<int> encoder_hidden{64, 64};
  int latent_dim = 8;
  int ppo_epochs = 3;
  int disc_updates_per_iteration = 2;
  double value_loss_coef = 0.5;
  double init_log_std = -1.0;
  std::string loss_mode = "vanilla";
  std::string reset_mode = "mixed";
  double reference_init_fraction = 0.7;
  int episode_length = 300;
  int checkpoint_every = 0;  // iterations; 0 = only the final checkpoint
  std::string nli_endpoint;

  // dataset
  double clip_seconds = 5.0;
  sim::SkillTable skill_table = sim::default_skill_table();
  std::vector<std::string> task_skills;  // empty = every skill in the table

  void validate() const;

  disc::DiscLossWeights disc_weights() const;
  disc::LossMode disc_mode() const { return disc::parse_loss_mode(loss_mode); }
  /// Skill table restricted to task_skills.
  sim::SkillTable task_table() const;
  sim::DatasetConfig dataset_config() const;
  sim::SimParams sim_params() const;
};

/// Loads a YAML config. Unknown keys are rejected; missing keys keep defaults.
TrainConfig load_config(const std::filesystem::path& path);
TrainConfig config_from_yaml(const std::string& text);

/// Canonical YAML with every key, published values recorded in comments.
std::string config_to_yaml(const TrainConfig& config);
void save_config(const TrainConfig& config, const std::filesystem::path& path);

/// The 4-skill task (walk-forward, walk-backward, turn-left, idle) with the
/// desk-scale tuning: 8 PPO epochs, 8 discriminator updates, log std -2.
TrainConfig four_skill_config();

}  // namespace skillmix::policy
