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

#include "skillmix/policy/rollout.hpp"

#include "skillmix/nn/gaussian.hpp"

namespace skillmix::policy {

VecEnv::VecEnv(sim::SimParams params, const sim::ReferenceDataset& dataset, int count, uint64_t seed,
               sim::ResetMode mode, double reference_fraction)
    : params_(params), dataset_(&dataset), mode_(mode), reference_fraction_(reference_fraction) {
  require(count > 0, "invalid_argument", "need at least one environment");
  envs_.resize(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    envs_[static_cast<size_t>(i)].rng.seed(derive_seed(seed, static_cast<uint64_t>(i)));
    reset(i);
  }
}

void VecEnv::reset(int i) {
  EnvInstance& e = at(i);
  const sim::ResetResult r = sim::reset(params_, mode_, *dataset_, dataset_->skills(), e.rng, reference_fraction_);
  e.state = r.state;
  e.skill = r.skill.skill_id;
  e.step = 0;
  e.episode_return = 0.0;
}

RolloutResult collect_rollouts(const ActorCritic& ac, const disc::Discriminator& d, VecEnv& envs, int horizon,
                               const RewardWeights& weights, disc::FakeReplayBuffer* replay) {
  const int E = envs.size();
  const int J = envs.params().joints;
  const int obs_dim = sim::policy_base_size(J);
  const int F = sim::disc_feature_size(J);
  RolloutResult out;
  out.buffer = RolloutBuffer(E, horizon, obs_dim, ac.latent_dim, ac.action_dim());
  RolloutBuffer& b = out.buffer;

  // one latent per skill, recomputed per collection
  std::vector<int> all_skills(static_cast<size_t>(ac.num_skills));
  for (int k = 0; k < ac.num_skills; ++k) all_skills[static_cast<size_t>(k)] = k;
  const Mat z_table = ac.encode_batch(all_skills);

  Mat obs(obs_dim, E), z(ac.latent_dim, E);
  Mat feat_t(F, E), feat_next(F, E);
  std::vector<int> skills(static_cast<size_t>(E));
  for (int t = 0; t < horizon; ++t) {
    for (int e = 0; e < E; ++e) {
      const EnvInstance& env = envs.at(e);
      obs.col(e) = sim::observe_policy_base(env.state);
      z.col(e) = z_table.col(env.skill);
      skills[static_cast<size_t>(e)] = env.skill;
    }
    const Mat x = ActorCritic::join(obs, z);
    const Mat means = ac.policy.forward_batch(x);
    const Vec vals = ac.value.forward_batch(x).row(0).transpose();

    std::vector<char> ok(static_cast<size_t>(E), 1);
    std::vector<RegularizationRewards> regs(static_cast<size_t>(E));
    std::vector<sim::AgentState> next(static_cast<size_t>(E));
    for (int e = 0; e < E; ++e) {
      EnvInstance& env = envs.at(e);
      const int k = b.index(e, t);
      const nn::GaussianSample s = nn::gaussian_sample(means.col(e), ac.log_std, env.rng);
      b.base_obs.col(k) = obs.col(e);
      b.z.col(k) = z.col(e);
      b.skills[static_cast<size_t>(k)] = env.skill;
      b.actions.col(k) = s.action;
      b.log_probs[k] = s.log_prob;
      b.values[k] = vals[e];

      feat_t.col(e) = sim::observe_disc(env.state);
      try {
        const sim::StepOutcome step = sim::step_detailed(envs.params(), env.state, s.action);
        regs[static_cast<size_t>(e)] = regularization_rewards(env.state.joint_vel, step.state.joint_vel,
                                                              step.mean_torque, step.state.prev_action,
                                                              env.state.prev_action);
        next[static_cast<size_t>(e)] = step.state;
        feat_next.col(e) = sim::observe_disc(step.state);
      } catch (const sim::SimulationDiverged&) {
        ok[static_cast<size_t>(e)] = 0;
        feat_next.col(e) = feat_t.col(e);
        ++out.diverged;
      }
    }

    const Vec style = disc::style_rewards(d, feat_t, feat_next, skills);
    for (int e = 0; e < E; ++e) {
      EnvInstance& env = envs.at(e);
      const int k = b.index(e, t);
      bool done = true;
      if (ok[static_cast<size_t>(e)]) {
        const auto& r = regs[static_cast<size_t>(e)];
        b.style[k] = style[e];
        b.dof_velocity[k] = r.dof_velocity;
        b.energy[k] = r.energy;
        b.action_rate[k] = r.action_rate;
        b.torque[k] = r.torque;
        b.rewards[k] = total_reward(style[e], r, weights);
        env.state = next[static_cast<size_t>(e)];
        ++env.step;
        done = env.step >= envs.params().episode_length || sim::joint_limit_breached(envs.params(), env.state);

        disc::TransitionSample fake{feat_t.col(e), feat_next.col(e), env.skill, disc::Provenance::fake};
        if (replay) replay->push(fake);
        out.fakes.push_back(std::move(fake));
      }
      env.episode_return += b.rewards[k];
      b.dones[k] = done ? 1.0 : 0.0;
      if (done) {
        out.finished.push_back({env.skill, env.episode_return});
        envs.reset(e);
      }
    }
  }

  for (int e = 0; e < E; ++e) {
    const EnvInstance& env = envs.at(e);
    obs.col(e) = sim::observe_policy_base(env.state);
    z.col(e) = z_table.col(env.skill);
  }
  b.bootstrap_values = ac.values(obs, z);
  return out;
}

}  // namespace skillmix::policy
