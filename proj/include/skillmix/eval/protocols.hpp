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

#include <optional>
#include <string>
#include <vector>

#include "skillmix/eval/matching.hpp"
#include "skillmix/policy/actor_critic.hpp"

namespace skillmix::eval {

struct Segment {
  int start_step = 0;
  int skill_id = 0;
};

/// Generated motion: frames[0] is the start state, frames[t + 1] follows
/// control step t.
struct Trajectory {
  std::vector<Vec> frames;
  std::vector<Segment> commanded;

  int length() const { return static_cast<int>(frames.size()) - 1; }
  void validate() const;
  /// Frames after each step as columns (F x L), the start frame dropped.
  Mat step_frames() const;
};

/// Rolls the conditioned policy from the stand state. The active skill at
/// step t is the last segment with start_step <= t. Returns nothing when the
/// simulator diverges.
std::optional<Trajectory> rollout_trajectory(const policy::ActorCritic& ac, const sim::SimParams& params,
                                             const std::vector<Segment>& schedule, int steps, Rng& rng,
                                             bool deterministic = false);

struct ProtocolSettings {
  int trajectories = 200;
  int length = 200;  // steps per trajectory, or per half for transitions
  int repeats = 10;  // APD only
  uint64_t seed = 0;
  bool deterministic = false;
  bool standardize = false;  // per-dimension scaling before matching
  bool freeze_seed = false;  // APD repeats reuse one seed
  int max_attempts = 20;     // per trajectory, before giving up on divergence

  static ProtocolSettings coverage_desk() { return {}; }
  static ProtocolSettings coverage_full() { return {2000, 200, 1}; }
  static ProtocolSettings transitions_desk() { return {}; }
  static ProtocolSettings transitions_full() { return {2000, 200, 1}; }
  static ProtocolSettings apd_desk() { return {200, 100, 10}; }
  static ProtocolSettings apd_full() { return {2000, 200, 10}; }
};

struct CoverageReport {
  std::vector<sim::SkillLabel> skills;
  Vec frequencies;
  int trajectories = 0;
  uint64_t seed = 0;
  int discarded = 0;  // diverged rollouts that were resampled
};

/// Shannon entropy in nats.
double coverage_entropy(const Vec& frequencies);

CoverageReport coverage_protocol(const policy::ActorCritic& ac, const sim::SimParams& params,
                                 const sim::ReferenceDataset& dataset, const ProtocolSettings& settings);

struct TransitionMatrix {
  std::vector<sim::SkillLabel> skills;
  Mat probabilities;            // rows: source class, columns: destination class
  std::vector<int> row_counts;  // rows with zero samples stay all-zero
  int trajectories = 0;
  int discarded = 0;

  std::vector<int> empty_rows() const;
};

TransitionMatrix transition_protocol(const policy::ActorCritic& ac, const sim::SimParams& params,
                                     const sim::ReferenceDataset& dataset, const ProtocolSettings& settings);

/// Average pairwise distance. Each trajectory is F x L; the pair distance is
/// the square root of the summed squared frame differences.
double apd(const std::vector<Mat>& trajectories);
/// Same quantity with one column-wise pass per trajectory.
double apd_vectorized(const std::vector<Mat>& trajectories);

struct ApdReport {
  std::vector<double> per_repeat;
  double mean = 0.0;
  int trajectories = 0;
  int length = 0;
  int discarded = 0;
};

ApdReport apd_protocol(const policy::ActorCritic& ac, const sim::SimParams& params, const ProtocolSettings& settings);

}  // namespace skillmix::eval
