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

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "skillmix/common.hpp"
#include "skillmix/nn/checkpoint.hpp"
#include "skillmix/nn/mlp.hpp"
#include "skillmix/sim/dataset.hpp"

namespace skillmix::disc {

/// Probability clamp used by every log-based term.
inline constexpr double kProbEps = 1e-7;

enum class LossMode { vanilla, least_squares };
std::string to_string(LossMode m);
LossMode parse_loss_mode(const std::string& s);

enum class Provenance { real, fake };

struct TransitionSample {
  Vec s_t;
  Vec s_next;
  int skill_id = 0;
  Provenance provenance = Provenance::real;
};

struct DiscriminatorBatch {
  std::vector<TransitionSample> real;
  std::vector<TransitionSample> fake;
  std::vector<TransitionSample> mismatched;  // real transitions carrying a wrong label
  std::vector<int> true_labels;              // true skill of each mismatched sample
};

/// Conditional discriminator D(s_t, s_next | c): the label enters as a one-hot
/// appended to the concatenated transition.
class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(int feature_dim, int num_skills, std::vector<int> hidden, LossMode mode, uint64_t seed);
  Discriminator(int feature_dim, int num_skills, LossMode mode, nn::Mlp net);

  int feature_dim() const { return feature_dim_; }
  int num_skills() const { return num_skills_; }
  LossMode mode() const { return mode_; }
  const nn::Mlp& net() const { return net_; }
  nn::Mlp& net() { return net_; }

  int input_size() const { return 2 * feature_dim_ + num_skills_; }
  /// 1 on the transition slots, 0 on the condition slots.
  Vec state_mask() const;

  Mat inputs(const std::vector<TransitionSample>& samples) const;
  Mat inputs(const Mat& s_t, const Mat& s_next, const std::vector<int>& skills) const;

  /// Clamped probability in vanilla mode, raw score in least-squares mode.
  double output(const TransitionSample& sample) const;
  Vec outputs(const Mat& s_t, const Mat& s_next, const std::vector<int>& skills) const;

  nn::Checkpoint to_checkpoint() const;
  static Discriminator from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  int feature_dim_ = 0;
  int num_skills_ = 0;
  LossMode mode_ = LossMode::vanilla;
  nn::Mlp net_;
};

/// D = clamp(sigmoid(net(...)), eps, 1 - eps).
double disc_forward(const Discriminator& d, const TransitionSample& sample);

struct LossResult {
  double value = 0.0;
  nn::NetworkParameters grads;
  std::optional<std::string> warning;
};

// Closed forms on probabilities / raw scores.
double clamp_prob(double p);
double imitation_loss_from_probs(const std::vector<double>& real, const std::vector<double>& fake);
double condition_aware_loss_from_probs(const std::vector<double>& mismatched);
double style_reward_from_prob(double d);
double ls_loss_from_scores(const std::vector<double>& real, const std::vector<double>& fake);
double ls_style_reward_from_score(double d);

/// L_I = -mean_real log D - mean_fake log(1 - D).
LossResult conditional_imitation_loss(const Discriminator& d, const std::vector<TransitionSample>& real,
                                      const std::vector<TransitionSample>& fake);
/// L_CA = -mean log(1 - D(s, s' | wrong label)). `true_labels` is checked.
LossResult condition_aware_loss(const Discriminator& d, const std::vector<TransitionSample>& mismatched,
                                const std::vector<int>& true_labels);
/// L_WD = sum of squared weight entries (biases excluded).
LossResult weight_decay_loss(const Discriminator& d);
/// L_GP = mean over samples of ||dD/d(s, s')||^2, condition slots held fixed.
LossResult gradient_penalty_loss(const Discriminator& d, const std::vector<TransitionSample>& real);
/// mean (D_real - 1)^2 + mean (D_fake + 1)^2 on the linear head.
LossResult ls_disc_loss(const Discriminator& d, const std::vector<TransitionSample>& real,
                        const std::vector<TransitionSample>& fake);

struct DiscLossWeights {
  double imitation = 1.0;
  double condition_aware = 1.0;
  double weight_decay = 1e-4;
  double gradient_penalty = 5.0;
};

struct TotalLoss {
  double total = 0.0;
  double imitation = 0.0;
  double condition_aware = 0.0;
  double weight_decay = 0.0;
  double gradient_penalty = 0.0;
  nn::NetworkParameters grads;
  std::vector<std::string> warnings;
};

/// w_I L_I + w_CA L_CA + w_WD L_WD + w_GP L_GP.
double combine_losses(const DiscLossWeights& w, double imitation, double condition_aware, double weight_decay,
                      double gradient_penalty);

/// Weighted sum of the discriminator objectives for the discriminator's mode.
TotalLoss total_disc_loss(const Discriminator& d, const DiscriminatorBatch& batch, const DiscLossWeights& w);

double style_reward(const Discriminator& d, const TransitionSample& sample);
Vec style_rewards(const Discriminator& d, const Mat& s_t, const Mat& s_next, const std::vector<int>& skills);

/// FIFO ring buffer of policy-generated transitions.
class FakeReplayBuffer {
 public:
  explicit FakeReplayBuffer(size_t capacity);

  void push(TransitionSample sample);
  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const TransitionSample& at(size_t i) const { return items_[i]; }
  const TransitionSample& sample(Rng& rng) const;

 private:
  size_t capacity_;
  std::deque<TransitionSample> items_;
};

struct BatchSizes {
  int real = 128;
  int fake = 128;
  int mismatched = 128;
};

/// Real transitions uniformly from the transition index, fakes from the replay
/// buffer (or `current_rollout` when the buffer is empty), mismatched samples as
/// fresh real transitions relabeled uniformly from C \ {c}.
DiscriminatorBatch assemble_batch(const sim::ReferenceDataset& dataset, const FakeReplayBuffer& fakes, Rng& rng,
                                  BatchSizes sizes, const std::vector<TransitionSample>* current_rollout = nullptr);

}  // namespace skillmix::disc
