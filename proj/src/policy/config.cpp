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

#include "skillmix/policy/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace skillmix::policy {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void emit_value(YAML::Emitter& y, double v) { y << num(v); }
void emit_value(YAML::Emitter& y, int v) { y << v; }
void emit_value(YAML::Emitter& y, long v) { y << v; }
void emit_value(YAML::Emitter& y, uint64_t v) { y << v; }
void emit_value(YAML::Emitter& y, const std::string& v) { y << YAML::DoubleQuoted << v; }
void emit_value(YAML::Emitter& y, const std::vector<int>& v) { y << YAML::Flow << v; }
void emit_value(YAML::Emitter& y, const std::vector<std::string>& v) { y << YAML::Flow << v; }

struct Field {
  std::string key;
  std::string comment;
  std::function<void(TrainConfig&, const YAML::Node&)> read;
  std::function<void(YAML::Emitter&, const TrainConfig&)> write;
};

template <typename T>
Field field(std::string key, T TrainConfig::*member, std::string comment = {}) {
  return Field{std::move(key), std::move(comment),
               [member](TrainConfig& c, const YAML::Node& n) { c.*member = n.as<T>(); },
               [member](YAML::Emitter& y, const TrainConfig& c) { emit_value(y, c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      field("style_reward_weight", &TrainConfig::style_reward_weight, "published: 1.0"),
      field("conditional_imitation_loss_weight", &TrainConfig::conditional_imitation_loss_weight, "published: 1.0"),
      field("condition_aware_loss_weight", &TrainConfig::condition_aware_loss_weight, "published: 1.0"),
      field("weight_decay_loss_weight", &TrainConfig::weight_decay_loss_weight, "published: 0.0001"),
      field("gradient_penalty_weight", &TrainConfig::gradient_penalty_weight, "published: 5.0"),
      field("dof_velocity_penalty_weight", &TrainConfig::dof_velocity_penalty_weight, "published: -1e-4"),
      field("action_rate_penalty_weight", &TrainConfig::action_rate_penalty_weight, "published: -1e-2"),
      field("energy_penalty_weight", &TrainConfig::energy_penalty_weight, "published: -2e-5"),
      field("torque_penalty_weight", &TrainConfig::torque_penalty_weight, "published: -1e-4"),
      field("adjust_ratio", &TrainConfig::adjust_ratio, "published: 0.5 (accepted, unused)"),
      field("discriminator_batch_size", &TrainConfig::discriminator_batch_size, "published: 512"),
      field("minibatch_size", &TrainConfig::minibatch_size, "published: 32768"),
      field("learning_rate", &TrainConfig::learning_rate, "published: 5e-5"),
      field("discount", &TrainConfig::discount, "published: 0.95"),
      field("replay_buffer_size", &TrainConfig::replay_buffer_size, "published: 1e6"),
      field("ppo_clip", &TrainConfig::ppo_clip, "published: 0.2"),
      field("gae", &TrainConfig::gae, "published: 0.95"),
      field("env_count", &TrainConfig::env_count, "published: 4096"),
      field("horizon", &TrainConfig::horizon),
      field("total_steps", &TrainConfig::total_steps, "published: 2e9"),
      field("seed", &TrainConfig::seed),
      field("policy_hidden", &TrainConfig::policy_hidden, "published: [512, 256]"),
      field("value_hidden", &TrainConfig::value_hidden, "published: [512, 256]"),
      field("disc_hidden", &TrainConfig::disc_hidden, "published: [512, 256]"),
      field("encoder_hidden", &TrainConfig::encoder_hidden, "published: [128, 128]"),
      field("latent_dim", &TrainConfig::latent_dim, "published: 8"),
      field("ppo_epochs", &TrainConfig::ppo_epochs),
      field("disc_updates_per_iteration", &TrainConfig::disc_updates_per_iteration),
      field("value_loss_coef", &TrainConfig::value_loss_coef),
      field("init_log_std", &TrainConfig::init_log_std),
      field("loss_mode", &TrainConfig::loss_mode, "vanilla | least-squares"),
      field("reset_mode", &TrainConfig::reset_mode, "mixed | default | from_reference"),
      field("reference_init_fraction", &TrainConfig::reference_init_fraction, "published: 0.7"),
      field("episode_length", &TrainConfig::episode_length),
      field("checkpoint_every", &TrainConfig::checkpoint_every),
      field("nli_endpoint", &TrainConfig::nli_endpoint),
      field("task_skills", &TrainConfig::task_skills, "empty = all skills in dataset.skills"),
  };
  return f;
}

Vec vec_from(const YAML::Node& n, const std::string& what) {
  const auto v = n.as<std::vector<double>>();
  require(!v.empty(), "config_error", what + " must be a non-empty list");
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::string> vec_strings(const Vec& v) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    require(allowed.count(key) > 0, "config_error", "unknown key '" + key + "' in " + where);
  }
}

sim::SkillTable skills_from_yaml(const YAML::Node& list) {
  std::vector<sim::SkillProgram> programs;
  for (const auto& s : list) {
    check_keys(s, {"name", "caption", "amplitude", "frequency", "phase", "offset"}, "dataset.skills entry");
    sim::SkillProgram p;
    p.label.skill_id = static_cast<int>(programs.size());
    p.label.name = s["name"].as<std::string>();
    p.label.caption = s["caption"].as<std::string>();
    p.amplitude = vec_from(s["amplitude"], "amplitude");
    p.frequency = s["frequency"].as<double>();
    p.phase = vec_from(s["phase"], "phase");
    p.offset = vec_from(s["offset"], "offset");
    programs.push_back(std::move(p));
  }
  return sim::SkillTable(std::move(programs));
}

}  // namespace

void TrainConfig::validate() const {
  require(discount > 0.0 && discount <= 1.0, "config_error", "discount must be in (0, 1]");
  require(gae >= 0.0 && gae <= 1.0, "config_error", "gae must be in [0, 1]");
  require(ppo_clip > 0.0, "config_error", "ppo_clip must be positive");
  require(learning_rate > 0.0, "config_error", "learning_rate must be positive");
  require(env_count > 0 && horizon > 0 && total_steps > 0, "config_error", "env_count/horizon/total_steps must be > 0");
  require(minibatch_size > 0 && discriminator_batch_size > 0 && replay_buffer_size > 0, "config_error",
          "batch and buffer sizes must be positive");
  require(latent_dim > 0 && ppo_epochs > 0 && disc_updates_per_iteration >= 0, "config_error",
          "latent_dim and ppo_epochs must be positive");
  require(!policy_hidden.empty() && !value_hidden.empty() && !disc_hidden.empty() && !encoder_hidden.empty(),
          "config_error", "every network needs at least one hidden layer");
  require(reference_init_fraction >= 0.0 && reference_init_fraction <= 1.0, "config_error",
          "reference_init_fraction must be in [0, 1]");
  require(episode_length > 0, "config_error", "episode_length must be positive");
  disc::parse_loss_mode(loss_mode);
  sim::parse_reset_mode(reset_mode);
  require(task_table().size() >= 1, "config_error", "task needs at least one skill");
}

disc::DiscLossWeights TrainConfig::disc_weights() const {
  return {conditional_imitation_loss_weight, condition_aware_loss_weight, weight_decay_loss_weight,
          gradient_penalty_weight};
}

sim::SkillTable TrainConfig::task_table() const {
  return task_skills.empty() ? skill_table : skill_table.subset(task_skills);
}

sim::DatasetConfig TrainConfig::dataset_config() const { return {task_table(), clip_seconds, seed}; }

sim::SimParams TrainConfig::sim_params() const {
  sim::SimParams p;
  p.episode_length = episode_length;
  return p;
}

TrainConfig config_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error("config_error", std::string("config parse error: ") + e.what());
  }
  TrainConfig c;
  if (!root || root.IsNull()) return c;
  require(root.IsMap(), "config_error", "config root must be a mapping");

  std::set<std::string> allowed{"dataset"};
  for (const auto& f : fields()) allowed.insert(f.key);
  check_keys(root, allowed, "config");

  try {
    for (const auto& f : fields()) {
      if (root[f.key]) f.read(c, root[f.key]);
    }
    if (const auto ds = root["dataset"]) {
      check_keys(ds, {"clip_seconds", "skills"}, "dataset");
      if (ds["clip_seconds"]) c.clip_seconds = ds["clip_seconds"].as<double>();
      if (ds["skills"]) c.skill_table = skills_from_yaml(ds["skills"]);
    }
  } catch (const YAML::Exception& e) {
    throw Error("config_error", std::string("config value error: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io_error", "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_yaml(ss.str());
}

std::string config_to_yaml(const TrainConfig& c) {
  YAML::Emitter y;
  y << YAML::BeginMap;
  for (const auto& f : fields()) {
    y << YAML::Key << f.key << YAML::Value;
    f.write(y, c);
    if (!f.comment.empty()) y << YAML::Comment(f.comment);
  }
  y << YAML::Key << "dataset" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "clip_seconds" << YAML::Value << num(c.clip_seconds);
  y << YAML::Key << "skills" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : c.skill_table.programs()) {
    y << YAML::BeginMap;
    y << YAML::Key << "name" << YAML::Value << p.label.name;
    y << YAML::Key << "caption" << YAML::Value << YAML::DoubleQuoted << p.label.caption;
    y << YAML::Key << "amplitude" << YAML::Value << YAML::Flow << vec_strings(p.amplitude);
    y << YAML::Key << "frequency" << YAML::Value << num(p.frequency);
    y << YAML::Key << "phase" << YAML::Value << YAML::Flow << vec_strings(p.phase);
    y << YAML::Key << "offset" << YAML::Value << YAML::Flow << vec_strings(p.offset);
    y << YAML::EndMap;
  }
  y << YAML::EndSeq << YAML::EndMap << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

void save_config(const TrainConfig& config, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(static_cast<bool>(out), "io_error", "cannot write " + path.string());
  out << config_to_yaml(config);
}

TrainConfig four_skill_config() {
  TrainConfig c;
  c.task_skills = {"walk-forward", "walk-backward", "turn-left", "idle"};
  c.ppo_epochs = 8;
  c.disc_updates_per_iteration = 8;
  c.init_log_std = -2.0;
  return c;
}

}  // namespace skillmix::policy
