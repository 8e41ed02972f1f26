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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skillmix/disc/discriminator.hpp"
#include "skillmix/policy/actor_critic.hpp"
#include "skillmix/policy/config.hpp"
#include "skillmix/policy/ppo.hpp"

namespace skillmix::policy {

/// One row of the metrics log.
struct IterationMetrics {
  int iteration = 0;
  long env_steps = 0;
  double imitation = 0.0;
  double condition_aware = 0.0;
  double gradient_penalty = 0.0;
  double weight_decay = 0.0;
  double mean_style_reward = 0.0;
  double mean_return = 0.0;
  std::vector<double> skill_returns;  // NaN when no episode of that skill finished
};

std::string metrics_header(int num_skills);
std::string metrics_row(const IterationMetrics& m);

struct TrainResult {
  ActorCritic actor_critic;
  disc::Discriminator discriminator;
  sim::ReferenceDataset dataset;
  std::vector<IterationMetrics> metrics;
  std::vector<std::string> warnings;
};

struct TrainOptions {
  std::optional<std::filesystem::path> output_dir;  // checkpoints, metrics.csv, config snapshot
  std::function<void(const IterationMetrics&)> on_iteration;
};

/// Alternates rollout collection, discriminator updates and PPO updates until
/// total_steps environment steps have been collected.
TrainResult train(const TrainConfig& config, const TrainOptions& options = {});

/// Writes actor-critic, discriminator and meta into `dir`.
void save_training_checkpoint(const TrainResult& result, const TrainConfig& config, const std::filesystem::path& dir,
                              long env_steps);

struct LoadedModel {
  CheckpointSet actor_critic;
  disc::Discriminator discriminator;
};
LoadedModel load_training_checkpoint(const std::filesystem::path& dir);

}  // namespace skillmix::policy
