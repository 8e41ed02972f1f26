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

#include "skillmix/policy/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skillmix/policy/gae.hpp"

namespace skillmix::policy {

RolloutBuffer::RolloutBuffer(int e, int h, int obs_dim, int latent_dim, int action_dim) : envs(e), horizon(h) {
  const int n = e * h;
  base_obs = Mat::Zero(obs_dim, n);
  skills.assign(static_cast<size_t>(n), 0);
  z = Mat::Zero(latent_dim, n);
  actions = Mat::Zero(action_dim, n);
  for (Vec* v : {&log_probs, &values, &rewards, &style, &dof_velocity, &energy, &action_rate, &torque, &dones}) {
    *v = Vec::Zero(n);
  }
  bootstrap_values = Vec::Zero(e);
}

void RolloutBuffer::validate() const {
  const Eigen::Index n = size();
  require(base_obs.cols() == n && z.cols() == n && actions.cols() == n && static_cast<Eigen::Index>(skills.size()) == n &&
              log_probs.size() == n && values.size() == n && rewards.size() == n && dones.size() == n &&
              bootstrap_values.size() == envs,
          "shape_mismatch", "rollout buffer arrays are inconsistent");
  require(rewards.allFinite(), "non_finite", "rollout rewards are not finite");
}

bool RolloutBuffer::operator==(const RolloutBuffer& o) const {
  return envs == o.envs && horizon == o.horizon && base_obs == o.base_obs && skills == o.skills && z == o.z &&
         actions == o.actions && log_probs == o.log_probs && values == o.values && rewards == o.rewards &&
         style == o.style && dof_velocity == o.dof_velocity && energy == o.energy && action_rate == o.action_rate &&
         torque == o.torque && dones == o.dones && bootstrap_values == o.bootstrap_values;
}

PpoOptimizers PpoOptimizers::for_model(const ActorCritic& ac, nn::AdamConfig config) {
  return {nn::OptimizerState::for_params(ac.policy.params(), config),
          nn::OptimizerState::for_params(ac.value.params(), config),
          nn::OptimizerState::for_params(ac.encoder.params(), config), nn::VectorAdam(ac.log_std.size(), config)};
}

AdvantageResult buffer_advantages(const RolloutBuffer& b, double gamma, double lambda) {
  AdvantageResult out{Vec::Zero(b.size()), Vec::Zero(b.size())};
  for (int e = 0; e < b.envs; ++e) {
    const int start = b.index(e, 0);
    Vec values(b.horizon + 1);
    values.head(b.horizon) = b.values.segment(start, b.horizon);
    values[b.horizon] = b.bootstrap_values[e];
    const AdvantageResult r =
        gae_advantages(b.rewards.segment(start, b.horizon), values, b.dones.segment(start, b.horizon), gamma, lambda);
    out.advantages.segment(start, b.horizon) = r.advantages;
    out.returns.segment(start, b.horizon) = r.returns;
  }
  return out;
}

SurrogateTerms clipped_surrogate(const Vec& ratio, const Vec& adv, double clip) {
  const double n = static_cast<double>(ratio.size());
  SurrogateTerms s{0.0, Vec::Zero(ratio.size())};
  for (Eigen::Index i = 0; i < ratio.size(); ++i) {
    const double r = ratio[i];
    const double unclipped = r * adv[i];
    const double clipped = std::clamp(r, 1.0 - clip, 1.0 + clip) * adv[i];
    s.loss -= std::min(unclipped, clipped) / n;
    // the clipped branch is flat outside the trust region
    const bool flat = (adv[i] > 0.0 && r > 1.0 + clip) || (adv[i] < 0.0 && r < 1.0 - clip);
    s.d_log_prob[i] = flat ? 0.0 : -adv[i] * r / n;
  }
  return s;
}

PpoStats ppo_update(ActorCritic& ac, PpoOptimizers& opt, const RolloutBuffer& buffer, const PpoSettings& settings,
                    Rng& rng) {
  buffer.validate();
  const AdvantageResult adv_ret = buffer_advantages(buffer, settings.gamma, settings.lambda);
  const Vec advantages = settings.normalize_advantages ? normalize(adv_ret.advantages) : adv_ret.advantages;
  const Vec& returns = adv_ret.returns;

  const int n = buffer.size();
  const int mb = std::min(settings.minibatch_size, n);
  const int obs_dim = static_cast<int>(buffer.base_obs.rows());
  const int latent = ac.latent_dim;
  std::vector<int> order(static_cast<size_t>(n));

  PpoStats stats;
  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int start = 0; start + mb <= n; start += mb) {
      const bool first = epoch == 0 && start == 0;
      Mat obs(obs_dim, mb), actions(buffer.actions.rows(), mb);
      Vec old_lp(mb), adv(mb), ret(mb);
      std::vector<int> skills(static_cast<size_t>(mb));
      for (int i = 0; i < mb; ++i) {
        const int k = order[static_cast<size_t>(start + i)];
        obs.col(i) = buffer.base_obs.col(k);
        actions.col(i) = buffer.actions.col(k);
        old_lp[i] = buffer.log_probs[k];
        adv[i] = advantages[k];
        ret[i] = returns[k];
        skills[static_cast<size_t>(i)] = buffer.skills[static_cast<size_t>(k)];
      }

      const Mat onehot = ac.onehot(skills);
      const nn::ForwardCache enc_cache = ac.encoder.forward_cached(onehot);
      const Mat x = ActorCritic::join(obs, enc_cache.output);
      const nn::ForwardCache pol_cache = ac.policy.forward_cached(x);
      const nn::ForwardCache val_cache = ac.value.forward_cached(x);

      Vec ratio(mb);
      std::vector<nn::GaussianGrad> lp_grads;
      lp_grads.reserve(static_cast<size_t>(mb));
      for (int i = 0; i < mb; ++i) {
        const Vec mean = pol_cache.output.col(i);
        const double lp = nn::gaussian_log_prob(actions.col(i), mean, ac.log_std);
        ratio[i] = std::exp(lp - old_lp[i]);
        lp_grads.push_back(nn::gaussian_log_prob_grad(actions.col(i), mean, ac.log_std));
      }
      ++stats.minibatches;
      if (!ratio.allFinite()) {
        ++stats.skipped_minibatches;
        continue;
      }
      if (first) stats.max_first_ratio_deviation = (ratio.array() - 1.0).abs().maxCoeff();

      const SurrogateTerms surr = clipped_surrogate(ratio, adv, settings.clip);
      Mat pol_grad_out(ac.action_dim(), mb);
      Vec log_std_grad = Vec::Zero(ac.log_std.size());
      for (int i = 0; i < mb; ++i) {
        pol_grad_out.col(i) = surr.d_log_prob[i] * lp_grads[static_cast<size_t>(i)].d_mean;
        log_std_grad += surr.d_log_prob[i] * lp_grads[static_cast<size_t>(i)].d_log_std;
      }
      const Vec v = val_cache.output.row(0).transpose();
      const Vec verr = v - ret;
      const double value_loss = verr.squaredNorm() / mb;
      const Mat val_grad_out = (settings.value_loss_coef * 2.0 / mb) * verr.transpose();

      const nn::BackwardResult pol_back = ac.policy.backward(pol_cache, pol_grad_out);
      const nn::BackwardResult val_back = ac.value.backward(val_cache, val_grad_out);
      const Mat z_grad = pol_back.input_grad.bottomRows(latent) + val_back.input_grad.bottomRows(latent);
      const nn::BackwardResult enc_back = ac.encoder.backward(enc_cache, z_grad);

      if (first) {
        stats.policy_loss = surr.loss;
        stats.value_loss = value_loss;
      }
      nn::adam_step(ac.policy.params(), pol_back.grads, opt.policy);
      nn::adam_step(ac.value.params(), val_back.grads, opt.value);
      nn::adam_step(ac.encoder.params(), enc_back.grads, opt.encoder);
      opt.log_std.apply(ac.log_std, log_std_grad);
      ac.log_std = nn::clamp_log_std(ac.log_std);
    }
  }
  return stats;
}

}  // namespace skillmix::policy
