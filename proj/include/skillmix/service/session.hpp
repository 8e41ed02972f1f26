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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skillmix/lang/router.hpp"
#include "skillmix/policy/trainer.hpp"

namespace skillmix::service {

using nlohmann::json;

/// Read-only model shared by every session.
struct ServiceModel {
  policy::CheckpointSet policy;
  disc::Discriminator discriminator;
  sim::SimParams params;
  std::vector<sim::SkillLabel> skills;  // from the dataset manifest
};

/// Loads a training checkpoint and the dataset manifest. Throws
/// incompatible_checkpoint when the skill sets disagree.
std::shared_ptr<const ServiceModel> load_service_model(const std::filesystem::path& checkpoint_dir,
                                                       const std::filesystem::path& dataset_dir,
                                                       const sim::SimParams& params = {});
void check_compatible(const ServiceModel& model);

struct SessionOptions {
  bool deterministic = true;  // act with the policy mean
  uint64_t seed = 0;
  double min_route_score = 0.0;
};

json error_message(const std::string& code, const std::string& detail);

/// One live control loop. Inbound messages are queued and take effect on the
/// next tick, whose state message acknowledges them; malformed input is
/// answered immediately with an error. The session clock advances by one
/// control step per emitted state message, so t strictly increases. While
/// paused, a tick only emits when a queued message needs acknowledging and
/// the agent is not stepped.
class Session {
 public:
  Session(std::shared_ptr<const ServiceModel> model, std::shared_ptr<const lang::Scorer> scorer,
          SessionOptions options = {});

  json hello() const;
  /// Parses and queues one inbound document; returns immediate replies.
  std::vector<json> handle(const std::string& raw);
  /// Advances one control step; returns the messages to send.
  std::vector<json> tick();

  int active_skill() const { return active_skill_; }
  bool paused() const { return paused_; }
  const sim::AgentState& state() const { return state_; }

 private:
  std::shared_ptr<const ServiceModel> model_;
  std::shared_ptr<const lang::Scorer> scorer_;
  lang::CaptionSet captions_;
  SessionOptions options_;
  Rng rng_;

  sim::AgentState state_;
  int active_skill_ = 0;
  std::optional<std::string> routed_from_;
  bool paused_ = false;
  long emitted_ = 0;

  bool pending_ack_ = false;
  std::optional<int> pending_skill_;
  std::optional<std::string> pending_routed_from_;
  bool pending_reset_ = false;
  std::optional<bool> pending_pause_;
};

}  // namespace skillmix::service
