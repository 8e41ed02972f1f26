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

#include "skillmix/policy/trainer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "skillmix/policy/rollout.hpp"

namespace skillmix::policy {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string metrics_header(int num_skills) {
  std::string h = "iteration,env_steps,L_I,L_CA,L_GP,L_WD,mean_r_s,mean_return";
  for (int k = 0; k < num_skills; ++k) h += ",return_" + std::to_string(k);
  return h;
}

std::string metrics_row(const IterationMetrics& m) {
  std::string r = std::to_string(m.iteration) + "," + std::to_string(m.env_steps) + "," + num(m.imitation) + "," +
                  num(m.condition_aware) + "," + num(m.gradient_penalty) + "," + num(m.weight_decay) + "," +
                  num(m.mean_style_reward) + "," + num(m.mean_return);
  for (double v : m.skill_returns) r += "," + num(v);
  return r;
}

void save_training_checkpoint(const TrainResult& result, const TrainConfig& config, const std::filesystem::path& dir,
                              long env_steps) {
  CheckpointSet set{result.actor_critic, result.dataset.skills(), {}};
  set.extra["env_steps"] = env_steps;
  set.extra["seed"] = config.seed;
  set.extra["loss_mode"] = config.loss_mode;
  save_actor_critic(set, dir);
  nn::save_checkpoint(result.discriminator.to_checkpoint(), dir / "discriminator.json");
}

LoadedModel load_training_checkpoint(const std::filesystem::path& dir) {
  LoadedModel m{load_actor_critic(dir), {}};
  m.discriminator = disc::Discriminator::from_checkpoint(nn::load_checkpoint(dir / "discriminator.json"));
  require(m.discriminator.num_skills() == m.actor_critic.actor_critic.num_skills, "checkpoint_format",
          "discriminator and policy disagree on the skill count");
  return m;
}

TrainResult train(const TrainConfig& config, const TrainOptions& options) {
  config.validate();
  const sim::SimParams sim_params = config.sim_params();

  TrainResult result;
  result.dataset = sim::generate_reference_dataset(sim_params, config.dataset_config());
  const int K = result.dataset.num_skills();
  const int F = result.dataset.feature_size();

  ActorCriticShape shape;
  shape.base_obs_dim = sim::policy_base_size(sim_params.joints);
  shape.action_dim = sim_params.joints;
  shape.num_skills = K;
  shape.latent_dim = config.latent_dim;
  shape.policy_hidden = config.policy_hidden;
  shape.value_hidden = config.value_hidden;
  shape.encoder_hidden = config.encoder_hidden;
  shape.init_log_std = config.init_log_std;
  result.actor_critic = ActorCritic(shape, derive_seed(config.seed, 100));
  result.discriminator =
      disc::Discriminator(F, K, config.disc_hidden, config.disc_mode(), derive_seed(config.seed, 200));

  const nn::AdamConfig adam{config.learning_rate};
  PpoOptimizers ppo_opt = PpoOptimizers::for_model(result.actor_critic, adam);
  nn::OptimizerState disc_opt = nn::OptimizerState::for_params(result.discriminator.net().params(), adam);

  VecEnv envs(sim_params, result.dataset, config.env_count, derive_seed(config.seed, 300),
              sim::parse_reset_mode(config.reset_mode), config.reference_init_fraction);
  disc::FakeReplayBuffer replay(static_cast<size_t>(config.replay_buffer_size));
  Rng ppo_rng(derive_seed(config.seed, 400));
  Rng batch_rng(derive_seed(config.seed, 500));

  const RewardWeights weights = RewardWeights::from(config);
  const PpoSettings ppo{config.ppo_clip,  config.discount,        config.gae, config.ppo_epochs,
                        config.minibatch_size, config.value_loss_coef, true};
  const disc::DiscLossWeights disc_w = config.disc_weights();
  const disc::BatchSizes batch_sizes{config.discriminator_batch_size, config.discriminator_batch_size,
                                     config.discriminator_batch_size};

  std::ofstream metrics_log;
  if (options.output_dir) {
    std::filesystem::create_directories(*options.output_dir);
    save_config(config, *options.output_dir / "config.resolved.yaml");
    metrics_log.open(*options.output_dir / "metrics.csv");
    metrics_log << metrics_header(K) << '\n';
  }

  auto abort_with_diagnostic = [&](const std::string& why, long steps) {
    if (options.output_dir) save_training_checkpoint(result, config, *options.output_dir / "diagnostic", steps);
    throw Error("training_diverged", why);
  };

  long env_steps = 0;
  int iteration = 0;
  while (env_steps < config.total_steps) {
    RolloutResult rollout = collect_rollouts(result.actor_critic, result.discriminator, envs, config.horizon,
                                             weights, &replay);
    env_steps += rollout.buffer.size();

    IterationMetrics m;
    m.iteration = iteration;
    m.env_steps = env_steps;
    m.mean_style_reward = rollout.buffer.style.mean();

    for (int u = 0; u < config.disc_updates_per_iteration; ++u) {
      const disc::DiscriminatorBatch batch =
          disc::assemble_batch(result.dataset, replay, batch_rng, batch_sizes, &rollout.fakes);
      const disc::TotalLoss loss = disc::total_disc_loss(result.discriminator, batch, disc_w);
      if (!std::isfinite(loss.total)) abort_with_diagnostic("non-finite discriminator loss", env_steps);
      for (const auto& w : loss.warnings) {
        if (result.warnings.empty() || result.warnings.back() != w) result.warnings.push_back(w);
      }
      try {
        nn::adam_step(result.discriminator.net().params(), loss.grads, disc_opt);
      } catch (const Error& e) {
        abort_with_diagnostic(e.what(), env_steps);
      }
      m.imitation = loss.imitation;
      m.condition_aware = loss.condition_aware;
      m.gradient_penalty = loss.gradient_penalty;
      m.weight_decay = loss.weight_decay;
    }

    PpoStats stats;
    try {
      stats = ppo_update(result.actor_critic, ppo_opt, rollout.buffer, ppo, ppo_rng);
    } catch (const Error& e) {
      abort_with_diagnostic(e.what(), env_steps);
    }
    if (!std::isfinite(stats.policy_loss) || !std::isfinite(stats.value_loss)) {
      abort_with_diagnostic("non-finite PPO loss", env_steps);
    }
    if (stats.skipped_minibatches > 0) result.warnings.push_back("skipped minibatch with non-finite ratio");

    m.skill_returns.assign(static_cast<size_t>(K), std::numeric_limits<double>::quiet_NaN());
    std::vector<int> counts(static_cast<size_t>(K), 0);
    double total = 0.0;
    for (const auto& ep : rollout.finished) {
      auto& slot = m.skill_returns[static_cast<size_t>(ep.skill)];
      slot = counts[static_cast<size_t>(ep.skill)]++ == 0 ? ep.total_return : slot + ep.total_return;
      total += ep.total_return;
    }
    for (int k = 0; k < K; ++k) {
      if (counts[static_cast<size_t>(k)] > 0) m.skill_returns[static_cast<size_t>(k)] /= counts[static_cast<size_t>(k)];
    }
    m.mean_return = rollout.finished.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : total / static_cast<double>(rollout.finished.size());

    if (metrics_log.is_open()) metrics_log << metrics_row(m) << '\n';
    if (options.on_iteration) options.on_iteration(m);
    result.metrics.push_back(std::move(m));
    ++iteration;

    if (options.output_dir && config.checkpoint_every > 0 && iteration % config.checkpoint_every == 0) {
      save_training_checkpoint(result, config, *options.output_dir / ("checkpoint_" + std::to_string(iteration)),
                               env_steps);
    }
  }
  if (options.output_dir) save_training_checkpoint(result, config, *options.output_dir / "checkpoint", env_steps);
  return result;
}

}  // namespace skillmix::policy
