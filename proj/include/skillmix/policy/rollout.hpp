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

#include "skillmix/disc/discriminator.hpp"
#include "skillmix/policy/ppo.hpp"
#include "skillmix/policy/rewards.hpp"
#include "skillmix/sim/dataset.hpp"

namespace skillmix::policy {

struct EnvInstance {
  sim::AgentState state;
  int skill = 0;
  int step = 0;  // control steps into the episode
  double episode_return = 0.0;
  Rng rng;
};

/// Independent agent instances with per-instance random streams.
class VecEnv {
 public:
  VecEnv(sim::SimParams params, const sim::ReferenceDataset& dataset, int count, uint64_t seed,
         sim::ResetMode mode = sim::ResetMode::mixed, double reference_fraction = 0.7);

  int size() const { return static_cast<int>(envs_.size()); }
  EnvInstance& at(int i) { return envs_[static_cast<size_t>(i)]; }
  const EnvInstance& at(int i) const { return envs_[static_cast<size_t>(i)]; }
  const sim::SimParams& params() const { return params_; }
  const sim::ReferenceDataset& dataset() const { return *dataset_; }
  void reset(int i);

 private:
  sim::SimParams params_;
  const sim::ReferenceDataset* dataset_;
  sim::ResetMode mode_;
  double reference_fraction_;
  std::vector<EnvInstance> envs_;
};

struct EpisodeRecord {
  int skill = 0;
  double total_return = 0.0;
};

struct RolloutResult {
  RolloutBuffer buffer;
  std::vector<disc::TransitionSample> fakes;  // generated transitions, in merge order
  std::vector<EpisodeRecord> finished;
  int diverged = 0;
};

/// Steps every instance `horizon` times with the stochastic policy, scores the
/// transitions with the discriminator snapshot and pushes fakes into `replay`.
RolloutResult collect_rollouts(const ActorCritic& ac, const disc::Discriminator& d, VecEnv& envs, int horizon,
                               const RewardWeights& weights, disc::FakeReplayBuffer* replay);

}  // namespace skillmix::policy
