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
#include <vector>

#include "skillmix/sim/dataset.hpp"

namespace skillmix::eval {

struct MatchResult {
  int clip = 0;
  double distance = 0.0;  // ||s_t - ref_t||^2 + ||s_next - ref_next||^2
};

/// Per-dimension affine map applied to both query and reference features.
struct FeatureScaling {
  Vec mean;
  Vec inv_std;
};

/// Mean and inverse standard deviation over every reference frame. Constant
/// dimensions keep unit scale.
FeatureScaling standardization(const sim::ReferenceDataset& dataset);

/// Nearest reference transition by exhaustive scan. Reference pairs are
/// stacked once so repeated queries stay cheap.
class MotionMatcher {
 public:
  explicit MotionMatcher(const sim::ReferenceDataset& dataset, std::optional<FeatureScaling> scaling = std::nullopt);

  /// Ties go to the lowest clip id.
  MatchResult match(const Vec& s_t, const Vec& s_next) const;
  int skill_of_clip(int clip) const { return clip_skill_[static_cast<size_t>(clip)]; }
  int num_skills() const { return num_skills_; }
  int feature_size() const { return feature_size_; }

 private:
  Vec scaled(const Vec& v) const;

  std::optional<FeatureScaling> scaling_;
  Mat pairs_;  // 2F x N, columns follow transition_index
  std::vector<int> pair_clip_;
  std::vector<int> clip_skill_;
  int num_skills_ = 0;
  int feature_size_ = 0;
};

MatchResult motion_match(const Vec& s_t, const Vec& s_next, const sim::ReferenceDataset& dataset);

struct Classification {
  int skill = 0;
  std::vector<int> votes;  // per skill id
};

/// Plurality vote over the pairs (frames[t], frames[t+1]) for t in
/// [first_pair, end_pair). Ties go to the lowest skill id.
Classification classify_frames(const std::vector<Vec>& frames, const MotionMatcher& matcher, int first_pair = 0,
                               int end_pair = -1);

int classify_trajectory(const std::vector<Vec>& frames, const sim::ReferenceDataset& dataset);

}  // namespace skillmix::eval
