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

#include "skillmix/policy/actor_critic.hpp"

#include <fstream>

namespace skillmix::policy {

namespace {

nn::NetworkSpec mlp_spec(int in, const std::vector<int>& hidden, int out, uint64_t seed) {
  nn::NetworkSpec s;
  s.layer_sizes.push_back(in);
  for (int h : hidden) s.layer_sizes.push_back(h);
  s.layer_sizes.push_back(out);
  s.hidden_activation = nn::Activation::relu;
  s.output_activation = nn::OutputActivation::linear;
  s.seed = seed;
  return s;
}

}  // namespace

ActorCritic::ActorCritic(const ActorCriticShape& shape, uint64_t seed)
    : num_skills(shape.num_skills), latent_dim(shape.latent_dim) {
  require(shape.num_skills >= 1 && shape.latent_dim >= 1 && shape.action_dim >= 1, "invalid_spec",
          "actor-critic needs skills, a latent and actions");
  const int in = shape.base_obs_dim + shape.latent_dim;
  policy = nn::Mlp(mlp_spec(in, shape.policy_hidden, shape.action_dim, derive_seed(seed, 1)));
  value = nn::Mlp(mlp_spec(in, shape.value_hidden, 1, derive_seed(seed, 2)));
  encoder = nn::Mlp(mlp_spec(shape.num_skills, shape.encoder_hidden, shape.latent_dim, derive_seed(seed, 3)));
  // small initial action means
  policy.params().weights.back() *= 0.01;
  log_std = Vec::Constant(shape.action_dim, shape.init_log_std);
}

Mat ActorCritic::onehot(const std::vector<int>& skills) const {
  Mat x = Mat::Zero(num_skills, static_cast<Eigen::Index>(skills.size()));
  for (size_t i = 0; i < skills.size(); ++i) {
    require(skills[i] >= 0 && skills[i] < num_skills, "unknown_skill",
            "skill_id " + std::to_string(skills[i]) + " out of range");
    x(skills[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return x;
}

Vec ActorCritic::encode(int skill_id) const { return encoder.forward_batch(onehot({skill_id})).col(0); }

Mat ActorCritic::encode_batch(const std::vector<int>& skills) const { return encoder.forward_batch(onehot(skills)); }

Mat ActorCritic::join(const Mat& base_obs, const Mat& z) {
  require(base_obs.cols() == z.cols(), "shape_mismatch", "observation and latent batch sizes differ");
  Mat x(base_obs.rows() + z.rows(), base_obs.cols());
  x.topRows(base_obs.rows()) = base_obs;
  x.bottomRows(z.rows()) = z;
  return x;
}

Mat ActorCritic::action_mean(const Mat& base_obs, const Mat& z) const { return policy.forward_batch(join(base_obs, z)); }

Vec ActorCritic::values(const Mat& base_obs, const Mat& z) const {
  return value.forward_batch(join(base_obs, z)).row(0).transpose();
}

bool ActorCritic::operator==(const ActorCritic& o) const {
  return policy.spec() == o.policy.spec() && policy.params() == o.policy.params() && value.spec() == o.value.spec() &&
         value.params() == o.value.params() && encoder.spec() == o.encoder.spec() &&
         encoder.params() == o.encoder.params() && log_std == o.log_std && num_skills == o.num_skills &&
         latent_dim == o.latent_dim;
}

Vec encode_condition(const ActorCritic& ac, int skill_id) { return ac.encode(skill_id); }

void save_actor_critic(const CheckpointSet& set, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& ac = set.actor_critic;
  nn::save_checkpoint({"policy", ac.policy, {}}, dir / "policy.json");
  nn::save_checkpoint({"value", ac.value, {}}, dir / "value.json");
  nn::save_checkpoint({"encoder", ac.encoder, {}}, dir / "encoder.json");

  nlohmann::json skills = nlohmann::json::array();
  for (const auto& s : set.skills) skills.push_back({{"skill_id", s.skill_id}, {"name", s.name}, {"caption", s.caption}});
  nlohmann::json meta{{"format_version", nn::kCheckpointFormatVersion},
                      {"num_skills", ac.num_skills},
                      {"latent_dim", ac.latent_dim},
                      {"log_std", std::vector<double>(ac.log_std.data(), ac.log_std.data() + ac.log_std.size())},
                      {"skills", skills},
                      {"extra", set.extra}};
  std::ofstream out(dir / "meta.json", std::ios::binary);
  require(static_cast<bool>(out), "io_error", "cannot write " + (dir / "meta.json").string());
  out << meta.dump(1) << '\n';
}

CheckpointSet load_actor_critic(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json", std::ios::binary);
  require(static_cast<bool>(in), "io_error", "cannot read " + (dir / "meta.json").string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint_format", std::string("meta.json: ") + e.what());
  }
  CheckpointSet set;
  auto& ac = set.actor_critic;
  try {
    require(meta.at("format_version").get<int>() == nn::kCheckpointFormatVersion, "checkpoint_format",
            "unsupported format_version");
    ac.num_skills = meta.at("num_skills").get<int>();
    ac.latent_dim = meta.at("latent_dim").get<int>();
    const auto ls = meta.at("log_std").get<std::vector<double>>();
    ac.log_std = Eigen::Map<const Vec>(ls.data(), static_cast<Eigen::Index>(ls.size()));
    for (const auto& s : meta.at("skills")) {
      set.skills.push_back({s.at("skill_id").get<int>(), s.at("name").get<std::string>(),
                            s.at("caption").get<std::string>()});
    }
    if (meta.contains("extra")) set.extra = meta.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint_format", std::string("meta.json: ") + e.what());
  }
  auto load_role = [&](const char* file, const char* role) {
    nn::Checkpoint c = nn::load_checkpoint(dir / file);
    require(c.role == role, "checkpoint_format", std::string(file) + " has role " + c.role);
    return c.network;
  };
  ac.policy = load_role("policy.json", "policy");
  ac.value = load_role("value.json", "value");
  ac.encoder = load_role("encoder.json", "encoder");
  require(ac.encoder.spec().input_size() == ac.num_skills && ac.encoder.spec().output_size() == ac.latent_dim &&
              ac.policy.spec().output_size() == ac.log_std.size() &&
              static_cast<int>(set.skills.size()) == ac.num_skills,
          "checkpoint_format", "checkpoint set shapes are inconsistent");
  return set;
}

}  // namespace skillmix::policy
