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

#include "skillmix/eval/matching.hpp"

#include <limits>

namespace skillmix::eval {

FeatureScaling standardization(const sim::ReferenceDataset& dataset) {
  require(!dataset.empty(), "empty_dataset", "cannot standardize an empty dataset");
  const int F = dataset.feature_size();
  Vec sum = Vec::Zero(F), sq = Vec::Zero(F);
  double n = 0.0;
  for (const auto& clip : dataset.clips()) {
    for (const Vec& f : clip.frames) {
      sum += f;
      sq += f.cwiseProduct(f);
      n += 1.0;
    }
  }
  FeatureScaling s;
  s.mean = sum / n;
  const Vec var = (sq / n - s.mean.cwiseProduct(s.mean)).cwiseMax(0.0);
  s.inv_std = Vec(F);
  for (int i = 0; i < F; ++i) s.inv_std[i] = var[i] > 1e-12 ? 1.0 / std::sqrt(var[i]) : 1.0;
  return s;
}

MotionMatcher::MotionMatcher(const sim::ReferenceDataset& dataset, std::optional<FeatureScaling> scaling)
    : scaling_(std::move(scaling)) {
  const auto& index = dataset.transition_index();
  require(!index.empty(), "empty_dataset", "dataset has no transitions to match against");
  feature_size_ = dataset.feature_size();
  num_skills_ = dataset.num_skills();
  for (const auto& clip : dataset.clips()) clip_skill_.push_back(clip.skill.skill_id);
  pairs_.resize(2 * feature_size_, static_cast<Eigen::Index>(index.size()));
  pair_clip_.reserve(index.size());
  for (size_t i = 0; i < index.size(); ++i) {
    pairs_.col(static_cast<Eigen::Index>(i)) << scaled(dataset.frame(index[i])), scaled(dataset.next_frame(index[i]));
    pair_clip_.push_back(index[i].clip);
  }
}

Vec MotionMatcher::scaled(const Vec& v) const {
  if (!scaling_) return v;
  return (v - scaling_->mean).cwiseProduct(scaling_->inv_std);
}

MatchResult MotionMatcher::match(const Vec& s_t, const Vec& s_next) const {
  require(s_t.size() == feature_size_ && s_next.size() == feature_size_, "shape_mismatch",
          "query features do not match the dataset feature size");
  Vec q(2 * feature_size_);
  q << scaled(s_t), scaled(s_next);
  const Vec d = (pairs_.colwise() - q).colwise().squaredNorm().transpose();
  MatchResult best{-1, std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const int clip = pair_clip_[static_cast<size_t>(i)];
    if (d[i] < best.distance || (d[i] == best.distance && clip < best.clip)) best = {clip, d[i]};
  }
  return best;
}

MatchResult motion_match(const Vec& s_t, const Vec& s_next, const sim::ReferenceDataset& dataset) {
  return MotionMatcher(dataset).match(s_t, s_next);
}

Classification classify_frames(const std::vector<Vec>& frames, const MotionMatcher& matcher, int first_pair,
                               int end_pair) {
  const int pairs = static_cast<int>(frames.size()) - 1;
  if (end_pair < 0) end_pair = pairs;
  require(first_pair >= 0 && end_pair <= pairs && first_pair < end_pair, "invalid_argument",
          "trajectory range holds no transition");
  Classification c;
  c.votes.assign(static_cast<size_t>(matcher.num_skills()), 0);
  for (int t = first_pair; t < end_pair; ++t) {
    const MatchResult m = matcher.match(frames[static_cast<size_t>(t)], frames[static_cast<size_t>(t + 1)]);
    ++c.votes[static_cast<size_t>(matcher.skill_of_clip(m.clip))];
  }
  for (int k = 1; k < matcher.num_skills(); ++k) {
    if (c.votes[static_cast<size_t>(k)] > c.votes[static_cast<size_t>(c.skill)]) c.skill = k;
  }
  return c;
}

int classify_trajectory(const std::vector<Vec>& frames, const sim::ReferenceDataset& dataset) {
  return classify_frames(frames, MotionMatcher(dataset)).skill;
}

}  // namespace skillmix::eval
