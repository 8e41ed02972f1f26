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

#include <array>
#include <string>
#include <vector>

#include "skillmix/common.hpp"

namespace skillmix::sim {

/// Physical constants of the planar agent. Defaults are the desk-scale model.
struct SimParams {
  int joints = 4;
  double kp = 20.0;
  double kd = 0.5;
  double q_max = 1.5;
  double limit_slack = 0.2;  // terminal when |q| > q_max + limit_slack
  double control_dt = 0.02;  // 50 Hz policy
  int substeps = 4;          // 200 Hz PD
  double gain_forward = 0.15;
  double gain_turn = 0.8;
  std::array<double, 2> coupling_sign{1.0, -1.0};  // gait joints 0-1
  double max_linvel = 50.0;
  int episode_length = 300;

  double substep_dt() const { return control_dt / substeps; }
};

/// Full state of the planar articulated agent.
struct AgentState {
  Eigen::Vector2d root_pos = Eigen::Vector2d::Zero();
  double root_heading = 0.0;  // wrapped to (-pi, pi]
  Eigen::Vector2d root_linvel = Eigen::Vector2d::Zero();
  double root_angvel = 0.0;
  Vec joint_pos;
  Vec joint_vel;
  Vec prev_action;
  double phase_time = 0.0;

  /// Canonical stand state: everything zero.
  static AgentState zero(int joints);

  bool finite() const;
  bool operator==(const AgentState&) const = default;
};

/// Result of one control step, including the substep-averaged torque.
struct StepOutcome {
  AgentState state;
  Vec mean_torque;
};

class SimulationDiverged : public Error {
 public:
  explicit SimulationDiverged(const std::string& what) : Error("simulation_diverged", what) {}
};

double wrap_angle(double a);

/// Body-frame forward speed produced by the gait joints.
double forward_speed(const SimParams& p, const Vec& joint_vel);
/// Heading rate produced by the steering joints 2 and 3.
double heading_rate(const SimParams& p, const Vec& joint_pos);

/// PD torque for target `action` at joint state (q, qd).
Vec pd_torque(const SimParams& p, const Vec& action, const Vec& q, const Vec& qd);

/// Advances one control period (4 PD substeps). Throws SimulationDiverged.
StepOutcome step_detailed(const SimParams& p, const AgentState& state, const Vec& action);
AgentState step(const SimParams& p, const AgentState& state, const Vec& action);

/// True when any joint exceeds the limit by more than the slack.
bool joint_limit_breached(const SimParams& p, const AgentState& state);

/// Chain-tip position of the 4-link unit chain, in the root frame.
Eigen::Vector2d chain_tip(const Vec& joint_pos);

int disc_feature_size(int joints);
int policy_base_size(int joints);
int policy_obs_size(int joints, int latent_dim);

/// Feature names, in the order produced by observe_disc.
std::vector<std::string> disc_feature_names(int joints);

/// [cos h, sin h, body linvel (2), angvel, q (J), qd (J), tip (2)]
Vec observe_disc(const AgentState& state);

/// Proprioceptive part of the policy observation, without the latent:
/// [prev_action (J), body linvel (2), cos h, sin h, q (J), qd (J)].
Vec observe_policy_base(const AgentState& state);

/// observe_policy_base followed by z.
Vec observe_policy(const AgentState& state, const Vec& z);

/// Inverse of observe_disc with root_pos at the origin and prev_action = q.
/// Throws when the feature vector is not a consistent agent state.
AgentState reconstruct_from_disc(const SimParams& p, const Vec& features);

}  // namespace skillmix::sim
