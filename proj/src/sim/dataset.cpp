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

#include "skillmix/sim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

namespace skillmix::sim {

ReferenceDataset::ReferenceDataset(std::vector<SkillLabel> skills, std::vector<MotionClip> clips)
    : skills_(std::move(skills)), clips_(std::move(clips)) {
  std::set<int> owned;
  const int K = num_skills();
  for (int k = 0; k < K; ++k) {
    require(skills_[static_cast<size_t>(k)].skill_id == k, "invalid_dataset", "skill ids must be 0..K-1");
  }
  const int dim = clips_.empty() || clips_.front().frames.empty() ? 0 : static_cast<int>(clips_.front().frames[0].size());
  for (size_t c = 0; c < clips_.size(); ++c) {
    const MotionClip& clip = clips_[c];
    require(clip.frames.size() >= 2, "invalid_dataset", "clip " + std::to_string(c) + " has fewer than 2 frames");
    require(clip.skill.skill_id >= 0 && clip.skill.skill_id < K, "invalid_dataset", "clip skill out of range");
    owned.insert(clip.skill.skill_id);
    for (size_t t = 0; t < clip.frames.size(); ++t) {
      require(clip.frames[t].size() == dim && clip.frames[t].allFinite(), "invalid_dataset",
              "bad frame in clip " + std::to_string(c));
      if (t + 1 < clip.frames.size()) transitions_.push_back({static_cast<int>(c), static_cast<int>(t)});
    }
  }
  require(static_cast<int>(owned.size()) == K, "invalid_dataset", "every skill must own at least one clip");
}

int ReferenceDataset::feature_size() const {
  return clips_.empty() ? 0 : static_cast<int>(clips_.front().frames.front().size());
}

size_t ReferenceDataset::total_frames() const {
  size_t n = 0;
  for (const auto& c : clips_) n += c.frames.size();
  return n;
}

const Vec& ReferenceDataset::frame(FrameRef r) const {
  return clips_[static_cast<size_t>(r.clip)].frames[static_cast<size_t>(r.frame)];
}

const Vec& ReferenceDataset::next_frame(FrameRef r) const {
  return clips_[static_cast<size_t>(r.clip)].frames[static_cast<size_t>(r.frame) + 1];
}

int ReferenceDataset::skill_of(FrameRef r) const { return clips_[static_cast<size_t>(r.clip)].skill.skill_id; }

bool ReferenceDataset::operator==(const ReferenceDataset& o) const {
  if (skills_ != o.skills_ || clips_.size() != o.clips_.size()) return false;
  for (size_t c = 0; c < clips_.size(); ++c) {
    const auto& a = clips_[c];
    const auto& b = o.clips_[c];
    if (a.skill != b.skill || a.dt != b.dt || a.source != b.source || a.frames.size() != b.frames.size()) return false;
    for (size_t t = 0; t < a.frames.size(); ++t) {
      if (a.frames[t] != b.frames[t]) return false;
    }
  }
  return true;
}

AgentState cycle_start(const SimParams& params, const SkillProgram& program) {
  const int J = params.joints;
  AgentState s = AgentState::zero(J);
  const double w = 2.0 * M_PI * program.frequency;
  const std::complex<double> gain = params.kp / std::complex<double>(params.kp - w * w, params.kd * w);
  for (int j = 0; j < J; ++j) {
    const double angle = program.phase[j] + std::arg(gain);
    s.joint_pos[j] = program.offset[j] + std::abs(gain) * program.amplitude[j] * std::sin(angle);
    s.joint_vel[j] = std::abs(gain) * program.amplitude[j] * w * std::cos(angle);
    s.prev_action[j] = std::clamp(program.amplitude[j] * std::sin(program.phase[j]) + program.offset[j],
                                  -params.q_max, params.q_max);
  }
  s.root_angvel = heading_rate(params, s.joint_pos);
  s.root_linvel = Eigen::Vector2d(forward_speed(params, s.joint_vel), 0.0);
  return s;
}

ReferenceDataset generate_reference_dataset(const SimParams& params, const DatasetConfig& config) {
  const int steps = static_cast<int>(std::lround(config.clip_seconds / params.control_dt));
  std::vector<MotionClip> clips;
  for (const auto& program : config.skills.programs()) {
    MotionClip clip;
    clip.skill = program.label;
    clip.dt = params.control_dt;
    AgentState state = cycle_start(params, program);
    clip.frames.push_back(observe_disc(state));
    try {
      for (int t = 1; t < steps; ++t) {
        const Vec target = scripted_expert(config.skills, program.label.skill_id, state.phase_time);
        state = step(params, state, target);
        clip.frames.push_back(observe_disc(state));
      }
    } catch (const SimulationDiverged& e) {
      throw Error("dataset_synthesis_failed", "skill '" + program.label.name + "' diverged: " + e.what());
    }
    clips.push_back(std::move(clip));
  }
  return ReferenceDataset(config.skills.labels(), std::move(clips));
}

ResetResult reset(const SimParams& params, ResetMode mode, const ReferenceDataset& dataset,
                  const std::vector<SkillLabel>& skills, Rng& rng, double reference_fraction) {
  require(!skills.empty(), "invalid_reset", "skill label set is empty");
  ResetResult out;
  out.state = AgentState::zero(params.joints);

  bool use_reference = false;
  switch (mode) {
    case ResetMode::default_state:
      break;
    case ResetMode::from_reference:
      use_reference = true;
      break;
    case ResetMode::mixed:
      use_reference = uniform01(rng) < reference_fraction;
      break;
  }
  if (use_reference) {
    require(!dataset.empty(), "invalid_reset", "reference reset requires a non-empty dataset");
    const auto& clips = dataset.clips();
    // uniform over all frames of all clips
    int pick = uniform_index(rng, static_cast<int>(dataset.total_frames()));
    for (const auto& clip : clips) {
      const int n = static_cast<int>(clip.frames.size());
      if (pick < n) {
        out.state = reconstruct_from_disc(params, clip.frames[static_cast<size_t>(pick)]);
        break;
      }
      pick -= n;
    }
    out.from_reference = true;
  }
  out.skill = skills[static_cast<size_t>(uniform_index(rng, static_cast<int>(skills.size())))];
  return out;
}

ResetMode parse_reset_mode(const std::string& text) {
  if (text == "mixed") return ResetMode::mixed;
  if (text == "default") return ResetMode::default_state;
  if (text == "from_reference") return ResetMode::from_reference;
  throw Error("invalid_argument", "unknown reset mode '" + text + "'");
}

}  // namespace skillmix::sim
