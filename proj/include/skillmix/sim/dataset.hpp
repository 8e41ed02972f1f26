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
#include <utility>
#include <vector>

#include "skillmix/common.hpp"
#include "skillmix/sim/agent.hpp"
#include "skillmix/sim/skills.hpp"

namespace skillmix::sim {

struct MotionClip {
  SkillLabel skill;
  double dt = 0.02;
  std::vector<Vec> frames;  // observe_disc features
  std::string source = "scripted-expert";
};

struct FrameRef {
  int clip = 0;
  int frame = 0;
  bool operator==(const FrameRef&) const = default;
};

/// Labeled expert demonstrations, addressable per state transition.
class ReferenceDataset {
 public:
  ReferenceDataset() = default;
  ReferenceDataset(std::vector<SkillLabel> skills, std::vector<MotionClip> clips);

  const std::vector<MotionClip>& clips() const { return clips_; }
  const std::vector<SkillLabel>& skills() const { return skills_; }
  /// Every (clip, t) such that (frames[t], frames[t+1]) is a transition.
  const std::vector<FrameRef>& transition_index() const { return transitions_; }

  int num_skills() const { return static_cast<int>(skills_.size()); }
  int feature_size() const;
  bool empty() const { return clips_.empty(); }
  size_t total_frames() const;

  const Vec& frame(FrameRef r) const;
  const Vec& next_frame(FrameRef r) const;
  int skill_of(FrameRef r) const;

  bool operator==(const ReferenceDataset& other) const;

 private:
  std::vector<SkillLabel> skills_;
  std::vector<MotionClip> clips_;
  std::vector<FrameRef> transitions_;
};

struct DatasetConfig {
  SkillTable skills = default_skill_table();
  double clip_seconds = 5.0;
  uint64_t seed = 0;
};

/// State on the steady-state cycle of the PD-tracked program at t = 0, so
/// clips carry no start-up transient.
AgentState cycle_start(const SimParams& params, const SkillProgram& program);

/// Rolls every scripted expert through the simulator from its cycle start.
ReferenceDataset generate_reference_dataset(const SimParams& params, const DatasetConfig& config);

enum class ResetMode { mixed, default_state, from_reference };

struct ResetResult {
  AgentState state;
  SkillLabel skill;
  bool from_reference = false;
};

/// Episode reset. Mixed mode draws 70% of states from reference frames, the
/// rest is the stand state; the label is sampled independently of the state.
ResetResult reset(const SimParams& params, ResetMode mode, const ReferenceDataset& dataset,
                  const std::vector<SkillLabel>& skills, Rng& rng, double reference_fraction = 0.7);

ResetMode parse_reset_mode(const std::string& text);

// On-disk format: manifest.yaml + one CSV per clip.
void save_dataset(const ReferenceDataset& dataset, const std::filesystem::path& dir);
ReferenceDataset load_dataset(const std::filesystem::path& dir);

/// Exact CSV text for one clip (header line = feature order).
std::string clip_to_csv(const MotionClip& clip);

}  // namespace skillmix::sim
