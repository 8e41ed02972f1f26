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

#include "skillmix/service/session.hpp"

namespace skillmix::service {

std::shared_ptr<const ServiceModel> load_service_model(const std::filesystem::path& checkpoint_dir,
                                                       const std::filesystem::path& dataset_dir,
                                                       const sim::SimParams& params) {
  policy::LoadedModel loaded = policy::load_training_checkpoint(checkpoint_dir);
  const sim::ReferenceDataset dataset = sim::load_dataset(dataset_dir);
  auto model = std::make_shared<ServiceModel>();
  model->policy = std::move(loaded.actor_critic);
  model->discriminator = std::move(loaded.discriminator);
  model->params = params;
  model->skills = dataset.skills();
  check_compatible(*model);
  return model;
}

void check_compatible(const ServiceModel& m) {
  const int K = static_cast<int>(m.skills.size());
  require(m.policy.actor_critic.num_skills == K && m.discriminator.num_skills() == K, "incompatible_checkpoint",
          "checkpoint has " + std::to_string(m.policy.actor_critic.num_skills) + " skills, manifest has " +
              std::to_string(K));
  require(m.policy.actor_critic.base_obs_dim() == sim::policy_base_size(m.params.joints) &&
              m.discriminator.feature_dim() == sim::disc_feature_size(m.params.joints),
          "incompatible_checkpoint", "checkpoint observation sizes do not match the agent");
}

json error_message(const std::string& code, const std::string& detail) {
  return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

Session::Session(std::shared_ptr<const ServiceModel> model, std::shared_ptr<const lang::Scorer> scorer,
                 SessionOptions options)
    : model_(std::move(model)), scorer_(std::move(scorer)), options_(options), rng_(options.seed) {
  require(model_ != nullptr && scorer_ != nullptr, "invalid_argument", "session needs a model and a scorer");
  check_compatible(*model_);
  captions_ = lang::CaptionSet::from_labels(model_->skills);
  state_ = sim::AgentState::zero(model_->params.joints);
}

json Session::hello() const {
  json skills = json::array();
  for (const auto& s : model_->skills) {
    skills.push_back({{"skill_id", s.skill_id}, {"name", s.name}, {"caption", s.caption}});
  }
  return {{"type", "hello"}, {"skills", skills}};
}

std::vector<json> Session::handle(const std::string& raw) {
  json msg;
  try {
    msg = json::parse(raw);
  } catch (const json::exception&) {
    return {error_message("bad_message", "inbound message is not a valid document")};
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return {error_message("bad_message", "inbound message needs a string field 'type'")};
  }
  const std::string type = msg["type"];
  if (type == "set_skill") {
    if (!msg.contains("skill_id") || !msg["skill_id"].is_number_integer()) {
      return {error_message("bad_message", "set_skill needs an integer skill_id")};
    }
    const int id = msg["skill_id"];
    if (id < 0 || id >= static_cast<int>(model_->skills.size())) {
      return {error_message("invalid_skill", "skill_id " + std::to_string(id) + " is out of range")};
    }
    pending_skill_ = id;
    pending_routed_from_.reset();
  } else if (type == "command") {
    if (!msg.contains("text") || !msg["text"].is_string() || msg["text"].get<std::string>().empty()) {
      return {error_message("bad_message", "command needs a non-empty text")};
    }
    const std::string text = msg["text"];
    try {
      const lang::RouteResult r = lang::route_command(text, captions_, *scorer_, options_.min_route_score);
      pending_skill_ = r.skill_id;
      pending_routed_from_ = text;
    } catch (const Error& e) {
      return {error_message(e.code(), e.what())};
    }
  } else if (type == "reset") {
    pending_reset_ = true;
  } else if (type == "pause") {
    pending_pause_ = true;
  } else if (type == "resume") {
    pending_pause_ = false;
  } else {
    return {error_message("unknown_type", "unknown message type '" + type + "'")};
  }
  pending_ack_ = true;
  return {};
}

std::vector<json> Session::tick() {
  std::vector<json> out;
  const bool ack = pending_ack_;
  pending_ack_ = false;
  if (pending_skill_) {
    active_skill_ = *pending_skill_;
    routed_from_ = pending_routed_from_;
    pending_skill_.reset();
    pending_routed_from_.reset();
  }
  if (pending_reset_) {
    state_ = sim::AgentState::zero(model_->params.joints);
    pending_reset_ = false;
  }
  const bool was_paused = paused_;
  if (pending_pause_) {
    paused_ = *pending_pause_;
    pending_pause_.reset();
  }
  const bool step_now = !was_paused;
  if (!step_now && !ack) return out;

  double r_s = 0.0;
  if (step_now) {
    const policy::ActorCritic& ac = model_->policy.actor_critic;
    const Vec z = ac.encode(active_skill_);
    const Vec mean = ac.policy.forward(sim::observe_policy(state_, z));
    const Vec action = options_.deterministic ? mean : nn::gaussian_sample(mean, ac.log_std, rng_).action;
    const Vec feat_t = sim::observe_disc(state_);
    try {
      state_ = sim::step(model_->params, state_, action);
      r_s = disc::style_reward(model_->discriminator,
                               {feat_t, sim::observe_disc(state_), active_skill_, disc::Provenance::fake});
    } catch (const sim::SimulationDiverged& e) {
      state_ = sim::AgentState::zero(model_->params.joints);
      out.push_back(error_message("simulation_diverged", std::string(e.what()) + "; agent reset"));
    }
  }

  ++emitted_;
  json state = {{"type", "state"},
                {"t", static_cast<double>(emitted_) * model_->params.control_dt},
                {"root_pos", {state_.root_pos.x(), state_.root_pos.y()}},
                {"root_heading", state_.root_heading},
                {"joint_pos", std::vector<double>(state_.joint_pos.data(),
                                                  state_.joint_pos.data() + state_.joint_pos.size())},
                {"active_skill", active_skill_},
                {"r_s", r_s}};
  if (routed_from_) state["routed_from"] = *routed_from_;
  out.push_back(std::move(state));
  return out;
}

}  // namespace skillmix::service
