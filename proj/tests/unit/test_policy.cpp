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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "skillmix/policy/actor_critic.hpp"
#include "skillmix/policy/config.hpp"
#include "skillmix/policy/gae.hpp"
#include "skillmix/policy/ppo.hpp"
#include "skillmix/policy/rewards.hpp"
#include "skillmix/policy/rollout.hpp"
#include "skillmix/policy/trainer.hpp"

using namespace skillmix;
using namespace skillmix::policy;

namespace {

// Direct sum over future TD errors, cut at episode ends.
Vec naive_gae(const Vec& r, const Vec& v, const Vec& done, double gamma, double lambda) {
  const Eigen::Index T = r.size();
  Vec adv = Vec::Zero(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    double coef = 1.0;
    for (Eigen::Index l = t; l < T; ++l) {
      const double next_v = done[l] != 0.0 ? 0.0 : v[l + 1];
      adv[t] += coef * (r[l] + gamma * next_v - v[l]);
      if (done[l] != 0.0) break;
      coef *= gamma * lambda;
    }
  }
  return adv;
}

ActorCriticShape tiny_shape(int K = 3) {
  ActorCriticShape s;
  s.base_obs_dim = 5;
  s.action_dim = 2;
  s.num_skills = K;
  s.latent_dim = 3;
  s.policy_hidden = {8};
  s.value_hidden = {8};
  s.encoder_hidden = {6};
  return s;
}

RolloutBuffer random_buffer(const ActorCritic& ac, int envs, int horizon, Rng& rng) {
  RolloutBuffer b(envs, horizon, ac.base_obs_dim(), ac.latent_dim, ac.action_dim());
  b.base_obs = testing::random_mat(rng, ac.base_obs_dim(), envs * horizon);
  for (int i = 0; i < envs * horizon; ++i) b.skills[static_cast<size_t>(i)] = i % ac.num_skills;
  b.z = ac.encode_batch(b.skills);
  const Mat means = ac.action_mean(b.base_obs, b.z);
  for (int i = 0; i < envs * horizon; ++i) {
    const nn::GaussianSample s = nn::gaussian_sample(means.col(i), ac.log_std, rng);
    b.actions.col(i) = s.action;
    b.log_probs[i] = s.log_prob;
  }
  b.values = ac.values(b.base_obs, b.z);
  b.rewards = testing::random_vec(rng, envs * horizon);
  b.style = b.dof_velocity = b.energy = b.action_rate = b.torque = Vec::Zero(envs * horizon);
  b.dones = Vec::Zero(envs * horizon);
  b.dones[horizon / 2] = 1.0;
  b.bootstrap_values = testing::random_vec(rng, envs);
  return b;
}

TrainConfig tiny_train_config() {
  TrainConfig c = four_skill_config();
  c.env_count = 4;
  c.horizon = 8;
  c.total_steps = 64;
  c.minibatch_size = 16;
  c.discriminator_batch_size = 8;
  c.policy_hidden = c.value_hidden = c.disc_hidden = {16};
  c.encoder_hidden = {8};
  c.clip_seconds = 0.5;
  return c;
}

}  // namespace

TEST_CASE("single-step advantage is the TD error") {
  Vec r(1), v(2), d(1);
  r << 1.5;
  v << 0.3, 2.0;
  d << 0.0;
  const AdvantageResult a = gae_advantages(r, v, d, 0.95, 0.95);
  CHECK(a.advantages[0] == doctest::Approx(1.5 + 0.95 * 2.0 - 0.3));
  CHECK(a.returns[0] == doctest::Approx(a.advantages[0] + 0.3));
}

TEST_CASE("unit discount and trace sum rewards to the bootstrap") {
  Vec r(4), v(5), d = Vec::Zero(4);
  r << 1, 2, 3, 4;
  v << 0.5, 0.1, -0.2, 0.7, 3.0;
  const AdvantageResult a = gae_advantages(r, v, d, 1.0, 1.0);
  CHECK(a.advantages[0] == doctest::Approx(10.0 + 3.0 - 0.5));
  CHECK(a.returns[0] == doctest::Approx(13.0));
}

TEST_CASE("GAE matches the direct sum with episode cuts") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int T = 12;
    const Vec r = testing::random_vec(rng, T), v = testing::random_vec(rng, T + 1);
    Vec d = Vec::Zero(T);
    d[uniform_index(rng, T)] = 1.0;
    const AdvantageResult a = gae_advantages(r, v, d, 0.95, 0.95);
    const Vec expected = naive_gae(r, v, d, 0.95, 0.95);
    CHECK((a.advantages - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.returns - (expected + v.head(T))).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("buffer advantages run GAE per environment row") {
  ActorCritic ac(tiny_shape(), 1);
  Rng rng(4);
  const RolloutBuffer b = random_buffer(ac, 3, 6, rng);
  const AdvantageResult all = buffer_advantages(b, 0.95, 0.95);
  for (int e = 0; e < 3; ++e) {
    Vec v(7);
    v << b.values.segment(e * 6, 6), b.bootstrap_values[e];
    const Vec expected = naive_gae(b.rewards.segment(e * 6, 6), v, b.dones.segment(e * 6, 6), 0.95, 0.95);
    CHECK((all.advantages.segment(e * 6, 6) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normalize gives zero mean and unit deviation") {
  Rng rng(5);
  const Vec n = normalize(testing::random_vec(rng, 50, 3.0));
  CHECK(std::abs(n.mean()) < 1e-12);
  CHECK(std::sqrt((n.array() - n.mean()).square().mean()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(normalize(Vec::Constant(4, 2.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("clipped surrogate against its definition") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Vec ratio = (testing::random_vec(rng, 10, 0.3)).array().exp();
    const Vec adv = testing::random_vec(rng, 10);
    const SurrogateTerms s = clipped_surrogate(ratio, adv, 0.2);
    double expected = 0.0;
    for (int i = 0; i < 10; ++i) {
      expected -= std::min(ratio[i] * adv[i], std::clamp(ratio[i], 0.8, 1.2) * adv[i]) / 10.0;
    }
    CHECK(s.loss == doctest::Approx(expected));

    // derivative w.r.t. log-probability, where ratio = exp(log_prob - old)
    const Vec logr = ratio.array().log();
    const Vec fd = testing::central_diff(
        [&](const Vec& lr) { return clipped_surrogate(lr.array().exp(), adv, 0.2).loss; }, logr, 1e-7);
    for (int i = 0; i < 10; ++i) {
      if (std::abs(std::abs(ratio[i] - 1.0) - 0.2) < 1e-4) continue;  // kink
      CHECK(s.d_log_prob[i] == doctest::Approx(fd[i]).epsilon(1e-5));
    }
  }
}

TEST_CASE("surrogate at unit ratio is the negative mean advantage") {
  Vec adv(3);
  adv << 1.0, -2.0, 4.0;
  CHECK(clipped_surrogate(Vec::Ones(3), adv, 0.2).loss == doctest::Approx(-1.0));
}

TEST_CASE("regularization rewards on a hand case") {
  Vec qd0(2), qd1(2), tau(2), a(2), pa(2);
  qd0 << 1.0, -2.0;
  qd1 << 0.5, -1.0;
  tau << 3.0, -1.0;
  a << 0.2, 0.1;
  pa << 0.0, 0.4;
  const RegularizationRewards r = regularization_rewards(qd0, qd1, tau, a, pa);
  CHECK(r.dof_velocity == doctest::Approx(0.25 + 1.0));
  CHECK(r.energy == doctest::Approx(3.0 + 2.0));
  CHECK(r.action_rate == doctest::Approx(0.04 + 0.09));
  CHECK(r.torque == doctest::Approx(4.0));

  const RewardWeights w;
  CHECK(total_reward(0.7, r, w) ==
        doctest::Approx(0.7 - 1e-4 * 1.25 - 2e-5 * 5.0 - 1e-2 * 0.13 - 1e-4 * 4.0));
}

TEST_CASE("penalties never raise the reward") {
  Rng rng(8);
  const RewardWeights w;
  for (int i = 0; i < 100; ++i) {
    const RegularizationRewards r = regularization_rewards(testing::random_vec(rng, 4), testing::random_vec(rng, 4),
                                                           testing::random_vec(rng, 4), testing::random_vec(rng, 4),
                                                           testing::random_vec(rng, 4));
    CHECK(r.dof_velocity >= 0.0);
    CHECK(r.energy >= 0.0);
    CHECK(r.action_rate >= 0.0);
    CHECK(r.torque >= 0.0);
    CHECK(total_reward(1.0, r, w) <= 1.0);
  }
}

TEST_CASE("latent depends only on the skill") {
  ActorCritic ac(tiny_shape(), 2);
  CHECK(ac.encode(1) == encode_condition(ac, 1));
  CHECK(ac.encode(0) != ac.encode(1));
  const Mat zb = ac.encode_batch({2, 0, 2});
  CHECK(zb.col(0) == ac.encode(2));
  CHECK(zb.col(1) == ac.encode(0));
  CHECK(ac.onehot({1}).col(0) == Eigen::Vector3d(0, 1, 0));
  CHECK(ac.log_std == Vec::Constant(2, -1.0));
}

TEST_CASE("first PPO minibatch sees unit ratios and the update is deterministic") {
  ActorCritic ac(tiny_shape(), 3);
  Rng rng(9);
  const RolloutBuffer b = random_buffer(ac, 4, 8, rng);
  ActorCritic a1 = ac, a2 = ac;
  PpoOptimizers o1 = PpoOptimizers::for_model(ac, {}), o2 = o1;
  Rng r1(5), r2(5);
  const PpoSettings settings{0.2, 0.95, 0.95, 3, 8, 0.5, true};
  const PpoStats s1 = ppo_update(a1, o1, b, settings, r1);
  ppo_update(a2, o2, b, settings, r2);
  CHECK(s1.max_first_ratio_deviation < 1e-12);
  CHECK(s1.minibatches == 12);
  CHECK(a1 == a2);
  CHECK(!(a1 == ac));
  CHECK(a1.encoder.params() != ac.encoder.params());
}

TEST_CASE("PPO raises the likelihood of positive-advantage actions") {
  ActorCriticShape shape = tiny_shape(1);
  ActorCritic ac(shape, 4);
  Rng rng(10);
  RolloutBuffer b = random_buffer(ac, 1, 64, rng);
  b.dones.setZero();
  b.dones[63] = 1.0;
  // reward equals the first action coordinate; pushing the mean upward helps
  for (int i = 0; i < 64; ++i) b.rewards[i] = b.actions(0, i);
  b.values.setZero();
  b.bootstrap_values.setZero();
  PpoOptimizers opt = PpoOptimizers::for_model(ac, nn::AdamConfig{1e-2});
  const double before = ac.action_mean(b.base_obs, b.z).row(0).mean();
  Rng prng(1);
  for (int i = 0; i < 20; ++i) ppo_update(ac, opt, b, {0.2, 0.0, 0.0, 1, 64, 0.5, true}, prng);
  CHECK(ac.action_mean(b.base_obs, b.z).row(0).mean() > before);
}

TEST_CASE("actor-critic checkpoint round trip") {
  ActorCritic ac(tiny_shape(), 5);
  const auto dir = testing::temp_dir("policy_ckpt");
  CheckpointSet set{ac, sim::four_skill_table().subset({"walk-forward", "walk-backward", "idle"}).labels(), {}};
  set.extra["seed"] = 5;
  save_actor_critic(set, dir);
  const CheckpointSet back = load_actor_critic(dir);
  CHECK(back.actor_critic == ac);
  CHECK(back.skills == set.skills);
  CHECK(back.extra.at("seed") == 5);
}

TEST_CASE("rollouts are reproducible and rewards are assembled from their terms") {
  const TrainConfig cfg = tiny_train_config();
  const sim::ReferenceDataset ds = sim::generate_reference_dataset(cfg.sim_params(), cfg.dataset_config());
  ActorCriticShape shape = tiny_shape(4);
  shape.base_obs_dim = sim::policy_base_size(4);
  shape.action_dim = 4;
  const ActorCritic ac(shape, 6);
  const disc::Discriminator d(sim::disc_feature_size(4), 4, {8}, disc::LossMode::vanilla, 7);
  const RewardWeights w;

  VecEnv e1(cfg.sim_params(), ds, 3, 11), e2(cfg.sim_params(), ds, 3, 11);
  disc::FakeReplayBuffer rb(1000);
  const RolloutResult r1 = collect_rollouts(ac, d, e1, 10, w, &rb);
  const RolloutResult r2 = collect_rollouts(ac, d, e2, 10, w, nullptr);
  CHECK(r1.buffer == r2.buffer);
  CHECK(rb.size() == r1.fakes.size());
  r1.buffer.validate();

  const auto& b = r1.buffer;
  for (int k = 0; k < b.size(); ++k) {
    const RegularizationRewards regs{b.dof_velocity[k], b.energy[k], b.action_rate[k], b.torque[k]};
    CHECK(b.rewards[k] == doctest::Approx(total_reward(b.style[k], regs, w)));
  }
  for (const auto& f : r1.fakes) {
    CHECK(f.provenance == disc::Provenance::fake);
    CHECK(disc::style_reward(d, f) >= 0.0);
  }
}

TEST_CASE("config YAML round trip and rejection of unknown keys") {
  TrainConfig c = four_skill_config();
  c.seed = 42;
  c.ppo_epochs = 7;
  const TrainConfig back = config_from_yaml(config_to_yaml(c));
  CHECK(config_to_yaml(back) == config_to_yaml(c));
  CHECK(back.seed == 42);
  CHECK(back.task_table().size() == 4);

  CHECK_THROWS_AS(config_from_yaml("no_such_key: 1\n"), Error);
  CHECK_THROWS_AS(config_from_yaml("discount: 1.5\n"), Error);
  CHECK(config_from_yaml("seed: 3\n").discount == 0.95);
}

TEST_CASE("published hyperparameters are the defaults") {
  const TrainConfig c;
  CHECK(c.style_reward_weight == 1.0);
  CHECK(c.conditional_imitation_loss_weight == 1.0);
  CHECK(c.condition_aware_loss_weight == 1.0);
  CHECK(c.weight_decay_loss_weight == 1e-4);
  CHECK(c.gradient_penalty_weight == 5.0);
  CHECK(c.dof_velocity_penalty_weight == -1e-4);
  CHECK(c.action_rate_penalty_weight == -1e-2);
  CHECK(c.energy_penalty_weight == -2e-5);
  CHECK(c.torque_penalty_weight == -1e-4);
  CHECK(c.discriminator_batch_size == 128);
  CHECK(c.learning_rate == 3e-4);
  CHECK(c.discount == 0.95);
  CHECK(c.replay_buffer_size == 100000);
  CHECK(c.ppo_clip == 0.2);
  CHECK(c.gae == 0.95);
}

TEST_CASE("tiny training run is reproducible and writes its artifacts") {
  const TrainConfig cfg = tiny_train_config();
  const auto dir = testing::temp_dir("train_tiny");
  const TrainResult a = train(cfg, {dir, {}});
  const TrainResult b = train(cfg);
  CHECK(a.actor_critic == b.actor_critic);
  CHECK(a.discriminator.net().params() == b.discriminator.net().params());
  CHECK(a.metrics.size() == 2);

  std::ifstream in(dir / "metrics.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == metrics_header(4));
  CHECK(header == "iteration,env_steps,L_I,L_CA,L_GP,L_WD,mean_r_s,mean_return,return_0,return_1,return_2,return_3");

  const LoadedModel m = load_training_checkpoint(dir / "checkpoint");
  CHECK(m.actor_critic.actor_critic == a.actor_critic);
  CHECK(m.discriminator.net().params() == a.discriminator.net().params());
  CHECK(m.actor_critic.extra.at("env_steps") == 64);
  CHECK(load_config(dir / "config.resolved.yaml").seed == cfg.seed);

  TrainConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(!(train(other).actor_critic == a.actor_critic));
}
