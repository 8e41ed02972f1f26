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

// Command-line entry point: dataset generation, training, evaluation,
// command routing, checkpoint inspection and the control service.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "skillmix/eval/reports.hpp"
#include "skillmix/lang/external.hpp"
#include "skillmix/lang/router.hpp"
#include "skillmix/policy/trainer.hpp"
#include "skillmix/service/server.hpp"

namespace fs = std::filesystem;
using namespace skillmix;

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

[[noreturn]] void fail(const std::string& code, const std::string& message) {
  std::cerr << "error: code=" << code << " message=" << quote(message) << '\n';
  std::exit(2);
}

policy::TrainConfig resolve_config(const std::string& path, bool four_skill) {
  if (!path.empty()) return policy::load_config(path);
  return four_skill ? policy::four_skill_config() : policy::TrainConfig{};
}

struct RunDir {
  policy::TrainConfig config;
  policy::LoadedModel model;
  sim::ReferenceDataset dataset;
};

RunDir open_run(const fs::path& dir) {
  RunDir r{policy::load_config(dir / "config.resolved.yaml"), policy::load_training_checkpoint(dir / "checkpoint"),
           sim::load_dataset(dir / "dataset")};
  require(r.model.actor_critic.actor_critic.num_skills == r.dataset.num_skills(), "incompatible_checkpoint",
          "checkpoint and dataset disagree on the skill count");
  return r;
}

service::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional adversarial skill imitation for a planar agent"};
  app.require_subcommand(1);

  // config
  auto* config_cmd = app.add_subcommand("config", "Print the canonical configuration");
  std::string config_in;
  bool config_four = false;
  config_cmd->add_option("--config", config_in, "Config file to resolve");
  config_cmd->add_flag("--four-skill", config_four, "Start from the 4-skill task");

  // dataset gen
  auto* dataset_cmd = app.add_subcommand("dataset", "Reference dataset tools");
  dataset_cmd->require_subcommand(1);
  auto* gen_cmd = dataset_cmd->add_subcommand("gen", "Synthesize the reference dataset");
  std::string gen_config, gen_out;
  bool gen_four = false;
  gen_cmd->add_option("--config", gen_config, "Config file");
  gen_cmd->add_flag("--four-skill", gen_four, "Use the 4-skill task");
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train policy and discriminator");
  std::string train_config, train_out, loss_mode;
  bool ablate_ca = false, ablate_wd = false, train_four = false, quiet = false;
  std::optional<uint64_t> train_seed;
  std::optional<long> train_steps;
  train_cmd->add_option("--config", train_config, "Config file");
  train_cmd->add_flag("--four-skill", train_four, "Use the 4-skill task");
  train_cmd->add_option("--out", train_out, "Run directory")->required();
  train_cmd->add_flag("--ablate-ca", ablate_ca, "Drop the condition-aware loss");
  train_cmd->add_flag("--ablate-wd", ablate_wd, "Drop the weight-decay loss");
  train_cmd->add_option("--loss-mode", loss_mode, "vanilla | least-squares")
      ->check(CLI::IsMember({"vanilla", "least-squares"}));
  train_cmd->add_option("--seed", train_seed, "Root seed");
  train_cmd->add_option("--total-steps", train_steps, "Environment steps");
  train_cmd->add_flag("--quiet", quiet, "No per-iteration output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluation protocols");
  std::string eval_kind, eval_run, eval_out;
  bool full_scale = false, standardize = false, deterministic = false;
  std::optional<int> n_traj, traj_len, repeats;
  uint64_t eval_seed = 0;
  eval_cmd->add_option("protocol", eval_kind, "coverage | transitions | apd")
      ->required()
      ->check(CLI::IsMember({"coverage", "transitions", "apd"}));
  eval_cmd->add_option("--run", eval_run, "Run directory from train")->required();
  eval_cmd->add_option("--out", eval_out, "Report directory (default: run directory)");
  eval_cmd->add_flag("--full-scale", full_scale, "2000 trajectories x 200 steps (x10 repeats for apd)");
  eval_cmd->add_option("--trajectories", n_traj, "Trajectory count");
  eval_cmd->add_option("--length", traj_len, "Steps per trajectory (per half for transitions)");
  eval_cmd->add_option("--repeats", repeats, "APD repetitions");
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");
  eval_cmd->add_flag("--standardize", standardize, "Standardize features before matching");
  eval_cmd->add_flag("--deterministic", deterministic, "Act with the policy mean");

  // route
  auto* route_cmd = app.add_subcommand("route", "Route a free-text command to a skill");
  std::string route_text, route_run, route_config, endpoint;
  double min_score = 0.0;
  route_cmd->add_option("text", route_text, "Command text")->required();
  route_cmd->add_option("--run", route_run, "Take captions from a run's dataset");
  route_cmd->add_option("--config", route_config, "Take captions from a config's skill table");
  route_cmd->add_option("--endpoint", endpoint, "External NLI endpoint URL");
  route_cmd->add_option("--min-score", min_score, "Refuse routes scoring below this");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the websocket control service");
  std::string serve_run, serve_host = "127.0.0.1", serve_endpoint;
  int serve_port = 8765;
  double slowdown = 1.0;
  bool stochastic = false;
  serve_cmd->add_option("--run", serve_run, "Run directory from train")->required();
  serve_cmd->add_option("--host", serve_host, "Bind address");
  serve_cmd->add_option("--port", serve_port, "Bind port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--slowdown", slowdown, "Wall-clock seconds per simulated second");
  serve_cmd->add_option("--endpoint", serve_endpoint, "External NLI endpoint URL");
  serve_cmd->add_flag("--stochastic", stochastic, "Sample actions instead of using the mean");

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a checkpoint directory");
  std::string inspect_dir;
  inspect_cmd->add_option("checkpoint", inspect_dir, "Checkpoint directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("usage", e.what());
  }

  try {
    if (*config_cmd) {
      std::cout << policy::config_to_yaml(resolve_config(config_in, config_four));
    } else if (*gen_cmd) {
      const policy::TrainConfig cfg = resolve_config(gen_config, gen_four);
      const auto ds = sim::generate_reference_dataset(cfg.sim_params(), cfg.dataset_config());
      sim::save_dataset(ds, gen_out);
      policy::save_config(cfg, fs::path(gen_out) / "config.resolved.yaml");
      std::cout << "dataset: " << ds.clips().size() << " clips, " << ds.total_frames() << " frames -> " << gen_out
                << '\n';
    } else if (*train_cmd) {
      policy::TrainConfig cfg = resolve_config(train_config, train_four);
      if (ablate_ca) cfg.condition_aware_loss_weight = 0.0;
      if (ablate_wd) cfg.weight_decay_loss_weight = 0.0;
      if (!loss_mode.empty()) cfg.loss_mode = loss_mode;
      if (train_seed) cfg.seed = *train_seed;
      if (train_steps) cfg.total_steps = *train_steps;
      policy::TrainOptions opts;
      opts.output_dir = fs::path(train_out);
      if (!quiet) {
        opts.on_iteration = [](const policy::IterationMetrics& m) {
          std::cout << "iter " << m.iteration << " steps " << m.env_steps << " L_I " << m.imitation << " L_CA "
                    << m.condition_aware << " r_s " << m.mean_style_reward << " return " << m.mean_return << '\n';
        };
      }
      const policy::TrainResult result = policy::train(cfg, opts);
      sim::save_dataset(result.dataset, fs::path(train_out) / "dataset");
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "trained " << result.metrics.back().env_steps << " steps -> " << train_out << '\n';
    } else if (*eval_cmd) {
      const RunDir run = open_run(eval_run);
      const policy::ActorCritic& ac = run.model.actor_critic.actor_critic;
      eval::ProtocolSettings s;
      if (eval_kind == "coverage") {
        s = full_scale ? eval::ProtocolSettings::coverage_full() : eval::ProtocolSettings::coverage_desk();
      } else if (eval_kind == "transitions") {
        s = full_scale ? eval::ProtocolSettings::transitions_full() : eval::ProtocolSettings::transitions_desk();
      } else {
        s = full_scale ? eval::ProtocolSettings::apd_full() : eval::ProtocolSettings::apd_desk();
      }
      if (n_traj) s.trajectories = *n_traj;
      if (traj_len) s.length = *traj_len;
      if (repeats) s.repeats = *repeats;
      s.seed = eval_seed;
      s.standardize = standardize;
      s.deterministic = deterministic;
      const fs::path out_dir = eval_out.empty() ? fs::path(eval_run) : fs::path(eval_out);

      YAML::Emitter snap;
      snap << YAML::BeginMap << YAML::Key << "protocol" << YAML::Value << eval_kind << YAML::Key << "run"
           << YAML::Value << fs::absolute(eval_run).string() << YAML::Key << "trajectories" << YAML::Value
           << s.trajectories << YAML::Key << "length" << YAML::Value << s.length << YAML::Key << "repeats"
           << YAML::Value << s.repeats << YAML::Key << "seed" << YAML::Value << s.seed << YAML::Key << "standardize"
           << YAML::Value << s.standardize << YAML::Key << "deterministic" << YAML::Value << s.deterministic
           << YAML::EndMap;
      eval::write_text(out_dir / ("eval_" + eval_kind + ".config.yaml"), std::string(snap.c_str()) + "\n");

      std::string text;
      fs::path file;
      if (eval_kind == "coverage") {
        text = eval::coverage_to_yaml(eval::coverage_protocol(ac, run.config.sim_params(), run.dataset, s));
        file = out_dir / "eval_coverage.yaml";
      } else if (eval_kind == "transitions") {
        text = eval::transitions_to_csv(eval::transition_protocol(ac, run.config.sim_params(), run.dataset, s));
        file = out_dir / "eval_transitions.csv";
      } else {
        text = eval::apd_to_yaml(eval::apd_protocol(ac, run.config.sim_params(), s));
        file = out_dir / "eval_apd.yaml";
      }
      eval::write_text(file, text);
      std::cout << text;
    } else if (*route_cmd) {
      std::vector<sim::SkillLabel> labels;
      if (!route_run.empty()) {
        labels = sim::load_dataset(fs::path(route_run) / "dataset").skills();
      } else {
        labels = resolve_config(route_config, false).task_table().labels();
      }
      const lang::CaptionSet captions = lang::CaptionSet::from_labels(labels);
      std::string configured = endpoint;
      if (configured.empty() && !route_config.empty()) configured = policy::load_config(route_config).nli_endpoint;
      const auto scorer = lang::make_scorer(configured);
      const lang::RouteResult r = lang::route_command(route_text, captions, *scorer, min_score);
      std::cout << labels[static_cast<size_t>(r.skill_id)].name << '\n';
      for (size_t i = 0; i < labels.size(); ++i) {
        std::cout << "  " << labels[i].skill_id << ' ' << labels[i].name << ' ' << quote(labels[i].caption) << ' '
                  << r.scores.scores[static_cast<Eigen::Index>(i)] << '\n';
      }
      std::cout << "backend " << lang::to_string(r.scores.backend) << '\n';
    } else if (*serve_cmd) {
      const RunDir run = open_run(serve_run);
      auto model = std::make_shared<service::ServiceModel>();
      model->policy = run.model.actor_critic;
      model->discriminator = run.model.discriminator;
      model->params = run.config.sim_params();
      model->skills = run.dataset.skills();
      std::string configured = serve_endpoint.empty() ? run.config.nli_endpoint : serve_endpoint;
      std::shared_ptr<const lang::Scorer> scorer = lang::make_scorer(configured);
      service::ServerOptions so;
      so.host = serve_host;
      so.port = static_cast<unsigned short>(serve_port);
      so.slowdown = slowdown;
      so.session.deterministic = !stochastic;
      service::Server server(model, scorer, so);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on ws://" << serve_host << ':' << server.port() << std::endl;
      server.run();
      g_server = nullptr;
    } else if (*inspect_cmd) {
      const policy::LoadedModel m = policy::load_training_checkpoint(inspect_dir);
      const policy::ActorCritic& ac = m.actor_critic.actor_critic;
      nlohmann::json j;
      auto net = [](const nn::Mlp& n) {
        return nlohmann::json{{"layers", n.spec().layer_sizes},
                              {"hidden_activation", nn::to_string(n.spec().hidden_activation)},
                              {"output_activation", nn::to_string(n.spec().output_activation)},
                              {"parameters", n.params().count()}};
      };
      j["policy"] = net(ac.policy);
      j["value"] = net(ac.value);
      j["encoder"] = net(ac.encoder);
      j["discriminator"] = net(m.discriminator.net());
      j["discriminator"]["loss_mode"] = disc::to_string(m.discriminator.mode());
      j["log_std"] = std::vector<double>(ac.log_std.data(), ac.log_std.data() + ac.log_std.size());
      j["skills"] = nlohmann::json::array();
      for (const auto& s : m.actor_critic.skills) j["skills"].push_back({{"skill_id", s.skill_id}, {"name", s.name}});
      j["extra"] = m.actor_critic.extra;
      std::cout << j.dump(2) << '\n';
    }
  } catch (const Error& e) {
    fail(e.code(), e.what());
  } catch (const YAML::Exception& e) {
    fail("config_error", e.what());
  } catch (const nlohmann::json::exception& e) {
    fail("parse_error", e.what());
  } catch (const std::exception& e) {
    fail("internal", e.what());
  }
  return 0;
}
