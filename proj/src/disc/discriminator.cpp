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

#include "skillmix/disc/discriminator.hpp"

#include <algorithm>
#include <cmath>

namespace skillmix::disc {

std::string to_string(LossMode m) { return m == LossMode::vanilla ? "vanilla" : "least-squares"; }

LossMode parse_loss_mode(const std::string& s) {
  if (s == "vanilla") return LossMode::vanilla;
  if (s == "least-squares" || s == "least_squares") return LossMode::least_squares;
  throw Error("invalid_argument", "unknown loss mode '" + s + "'");
}

Discriminator::Discriminator(int feature_dim, int num_skills, std::vector<int> hidden, LossMode mode, uint64_t seed)
    : feature_dim_(feature_dim), num_skills_(num_skills), mode_(mode) {
  require(num_skills >= 1, "invalid_spec", "discriminator needs at least one skill");
  nn::NetworkSpec spec;
  spec.layer_sizes.push_back(input_size());
  for (int h : hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(1);
  spec.hidden_activation = nn::Activation::tanh;
  spec.output_activation = mode == LossMode::vanilla ? nn::OutputActivation::sigmoid : nn::OutputActivation::linear;
  spec.seed = seed;
  net_ = nn::Mlp(std::move(spec));
}

Discriminator::Discriminator(int feature_dim, int num_skills, LossMode mode, nn::Mlp net)
    : feature_dim_(feature_dim), num_skills_(num_skills), mode_(mode), net_(std::move(net)) {
  require(net_.spec().input_size() == input_size() && net_.spec().output_size() == 1, "shape_mismatch",
          "discriminator network shape does not match feature/skill counts");
  const auto expected = mode == LossMode::vanilla ? nn::OutputActivation::sigmoid : nn::OutputActivation::linear;
  require(net_.spec().output_activation == expected, "mode_mismatch",
          "discriminator head does not match loss mode " + to_string(mode));
}

Vec Discriminator::state_mask() const {
  Vec m = Vec::Zero(input_size());
  m.head(2 * feature_dim_).setOnes();
  return m;
}

Mat Discriminator::inputs(const std::vector<TransitionSample>& samples) const {
  Mat x = Mat::Zero(input_size(), static_cast<Eigen::Index>(samples.size()));
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    require(s.s_t.size() == feature_dim_ && s.s_next.size() == feature_dim_, "shape_mismatch",
            "transition feature length mismatch");
    require(s.skill_id >= 0 && s.skill_id < num_skills_, "unknown_skill", "skill_id out of range");
    const auto c = static_cast<Eigen::Index>(i);
    x.col(c).head(feature_dim_) = s.s_t;
    x.col(c).segment(feature_dim_, feature_dim_) = s.s_next;
    x(2 * feature_dim_ + s.skill_id, c) = 1.0;
  }
  return x;
}

Mat Discriminator::inputs(const Mat& s_t, const Mat& s_next, const std::vector<int>& skills) const {
  require(s_t.rows() == feature_dim_ && s_next.rows() == feature_dim_ && s_t.cols() == s_next.cols() &&
              static_cast<size_t>(s_t.cols()) == skills.size(),
          "shape_mismatch", "transition batch shape mismatch");
  Mat x = Mat::Zero(input_size(), s_t.cols());
  x.topRows(feature_dim_) = s_t;
  x.middleRows(feature_dim_, feature_dim_) = s_next;
  for (size_t i = 0; i < skills.size(); ++i) {
    require(skills[i] >= 0 && skills[i] < num_skills_, "unknown_skill", "skill_id out of range");
    x(2 * feature_dim_ + skills[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return x;
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

double Discriminator::output(const TransitionSample& sample) const {
  const double raw = net_.forward_batch(inputs({sample}))(0, 0);
  return mode_ == LossMode::vanilla ? clamp_prob(raw) : raw;
}

Vec Discriminator::outputs(const Mat& s_t, const Mat& s_next, const std::vector<int>& skills) const {
  Vec raw = net_.forward_batch(inputs(s_t, s_next, skills)).row(0).transpose();
  if (mode_ == LossMode::vanilla) raw = raw.unaryExpr([](double p) { return clamp_prob(p); });
  return raw;
}

nn::Checkpoint Discriminator::to_checkpoint() const {
  nn::Checkpoint c{"discriminator", net_, {}};
  c.metadata["loss_mode"] = to_string(mode_);
  c.metadata["feature_dim"] = feature_dim_;
  c.metadata["num_skills"] = num_skills_;
  return c;
}

Discriminator Discriminator::from_checkpoint(const nn::Checkpoint& ckpt) {
  require(ckpt.role == "discriminator", "checkpoint_format", "checkpoint role is not discriminator");
  const auto& m = ckpt.metadata;
  require(m.contains("loss_mode") && m.contains("feature_dim") && m.contains("num_skills"), "checkpoint_format",
          "discriminator checkpoint lacks metadata");
  return Discriminator(m["feature_dim"].get<int>(), m["num_skills"].get<int>(),
                       parse_loss_mode(m["loss_mode"].get<std::string>()), ckpt.network);
}

double disc_forward(const Discriminator& d, const TransitionSample& sample) {
  require(d.mode() == LossMode::vanilla, "mode_mismatch", "disc_forward is defined for the vanilla head");
  require(sample.s_t.allFinite() && sample.s_next.allFinite(), "non_finite", "transition is not finite");
  return d.output(sample);
}

// ---- closed forms ----

double imitation_loss_from_probs(const std::vector<double>& real, const std::vector<double>& fake) {
  require(!real.empty() && !fake.empty(), "empty_batch", "imitation loss needs real and fake samples");
  double lr = 0.0, lf = 0.0;
  for (double p : real) lr -= std::log(clamp_prob(p));
  for (double p : fake) lf -= std::log(1.0 - clamp_prob(p));
  return lr / static_cast<double>(real.size()) + lf / static_cast<double>(fake.size());
}

double condition_aware_loss_from_probs(const std::vector<double>& mismatched) {
  require(!mismatched.empty(), "empty_batch", "condition-aware loss needs samples");
  double l = 0.0;
  for (double p : mismatched) l -= std::log(1.0 - clamp_prob(p));
  return l / static_cast<double>(mismatched.size());
}

double style_reward_from_prob(double d) { return -std::log(1.0 - clamp_prob(d)); }

double ls_loss_from_scores(const std::vector<double>& real, const std::vector<double>& fake) {
  require(!real.empty() && !fake.empty(), "empty_batch", "least-squares loss needs real and fake samples");
  double lr = 0.0, lf = 0.0;
  for (double d : real) lr += (d - 1.0) * (d - 1.0);
  for (double d : fake) lf += (d + 1.0) * (d + 1.0);
  return lr / static_cast<double>(real.size()) + lf / static_cast<double>(fake.size());
}

double ls_style_reward_from_score(double d) { return std::max(0.0, 1.0 - 0.25 * (d - 1.0) * (d - 1.0)); }

// ---- network losses ----

namespace {

// Mean of -log(clamp(D)) (positive=true) or -log(1 - clamp(D)) over the samples,
// with gradients. Clamped samples contribute no gradient.
LossResult log_loss(const Discriminator& d, const std::vector<TransitionSample>& samples, bool positive) {
  const nn::ForwardCache cache = d.net().forward_cached(d.inputs(samples));
  const double n = static_cast<double>(samples.size());
  Mat grad_out(1, cache.output.cols());
  LossResult r;
  for (Eigen::Index i = 0; i < cache.output.cols(); ++i) {
    const double raw = cache.output(0, i);
    const double p = clamp_prob(raw);
    const bool clamped = raw != p;
    if (positive) {
      r.value -= std::log(p) / n;
      grad_out(0, i) = clamped ? 0.0 : -1.0 / (p * n);
    } else {
      r.value -= std::log(1.0 - p) / n;
      grad_out(0, i) = clamped ? 0.0 : 1.0 / ((1.0 - p) * n);
    }
  }
  r.grads = d.net().backward(cache, grad_out).grads;
  return r;
}

void require_vanilla(const Discriminator& d, const char* what) {
  require(d.mode() == LossMode::vanilla, "mode_mismatch", std::string(what) + " requires the vanilla loss mode");
}

}  // namespace

LossResult conditional_imitation_loss(const Discriminator& d, const std::vector<TransitionSample>& real,
                                      const std::vector<TransitionSample>& fake) {
  require_vanilla(d, "conditional imitation loss");
  require(!real.empty() && !fake.empty(), "empty_batch", "imitation loss needs real and fake samples");
  LossResult r = log_loss(d, real, true);
  LossResult f = log_loss(d, fake, false);
  r.value += f.value;
  r.grads += f.grads;
  return r;
}

LossResult condition_aware_loss(const Discriminator& d, const std::vector<TransitionSample>& mismatched,
                                const std::vector<int>& true_labels) {
  require_vanilla(d, "condition-aware loss");
  if (d.num_skills() < 2 || mismatched.empty()) {
    LossResult r;
    r.grads = d.net().params().zeros_like();
    r.warning = d.num_skills() < 2 ? "single skill: mismatched labels impossible, condition-aware loss is 0"
                                   : "no mismatched samples, condition-aware loss is 0";
    return r;
  }
  require(true_labels.size() == mismatched.size(), "contract_violation", "true label list length mismatch");
  for (size_t i = 0; i < mismatched.size(); ++i) {
    require(mismatched[i].skill_id != true_labels[i], "contract_violation",
            "mismatched sample carries its true label " + std::to_string(true_labels[i]));
  }
  return log_loss(d, mismatched, false);
}

LossResult weight_decay_loss(const Discriminator& d) {
  LossResult r;
  r.grads = d.net().params().zeros_like();
  const auto& w = d.net().params().weights;
  for (size_t l = 0; l < w.size(); ++l) {
    r.value += w[l].squaredNorm();
    r.grads.weights[l] = 2.0 * w[l];
  }
  return r;
}

LossResult gradient_penalty_loss(const Discriminator& d, const std::vector<TransitionSample>& real) {
  require(!real.empty(), "empty_batch", "gradient penalty needs real samples");
  nn::PenaltyResult p = d.net().grad_penalty(d.inputs(real), d.state_mask());
  const double n = static_cast<double>(real.size());
  LossResult r;
  r.value = p.value / n;
  r.grads = std::move(p.grads);
  r.grads *= 1.0 / n;
  return r;
}

LossResult ls_disc_loss(const Discriminator& d, const std::vector<TransitionSample>& real,
                        const std::vector<TransitionSample>& fake) {
  require(d.mode() == LossMode::least_squares, "mode_mismatch", "least-squares loss requires the linear head");
  require(!real.empty() && !fake.empty(), "empty_batch", "least-squares loss needs real and fake samples");
  LossResult r;
  r.grads = d.net().params().zeros_like();
  for (const auto* group : {&real, &fake}) {
    const double target = group == &real ? 1.0 : -1.0;
    const nn::ForwardCache cache = d.net().forward_cached(d.inputs(*group));
    const double n = static_cast<double>(group->size());
    const Mat diff = cache.output.array() - target;
    r.value += diff.squaredNorm() / n;
    r.grads += d.net().backward(cache, 2.0 * diff / n).grads;
  }
  return r;
}

double combine_losses(const DiscLossWeights& w, double imitation, double condition_aware, double weight_decay,
                      double gradient_penalty) {
  return w.imitation * imitation + w.condition_aware * condition_aware + w.weight_decay * weight_decay +
         w.gradient_penalty * gradient_penalty;
}

TotalLoss total_disc_loss(const Discriminator& d, const DiscriminatorBatch& batch, const DiscLossWeights& w) {
  TotalLoss t;
  t.grads = d.net().params().zeros_like();
  auto add = [&](const LossResult& r, double weight, double& slot) {
    slot = r.value;
    if (weight == 0.0) return;
    t.total += weight * r.value;
    nn::NetworkParameters g = r.grads;
    g *= weight;
    t.grads += g;
    if (r.warning) t.warnings.push_back(*r.warning);
  };

  if (d.mode() == LossMode::vanilla) {
    add(conditional_imitation_loss(d, batch.real, batch.fake), w.imitation, t.imitation);
    add(condition_aware_loss(d, batch.mismatched, batch.true_labels), w.condition_aware, t.condition_aware);
    add(weight_decay_loss(d), w.weight_decay, t.weight_decay);
  } else {
    add(ls_disc_loss(d, batch.real, batch.fake), 1.0, t.imitation);
  }
  add(gradient_penalty_loss(d, batch.real), w.gradient_penalty, t.gradient_penalty);
  return t;
}

double style_reward(const Discriminator& d, const TransitionSample& sample) {
  const double out = d.output(sample);
  return d.mode() == LossMode::vanilla ? style_reward_from_prob(out) : ls_style_reward_from_score(out);
}

Vec style_rewards(const Discriminator& d, const Mat& s_t, const Mat& s_next, const std::vector<int>& skills) {
  Vec out = d.outputs(s_t, s_next, skills);
  if (d.mode() == LossMode::vanilla) return out.unaryExpr([](double p) { return style_reward_from_prob(p); });
  return out.unaryExpr([](double s) { return ls_style_reward_from_score(s); });
}

}  // namespace skillmix::disc
