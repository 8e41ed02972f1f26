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

#include "skillmix/sim/agent.hpp"

#include <cmath>
#include <numbers>

namespace skillmix::sim {

AgentState AgentState::zero(int joints) {
  AgentState s;
  s.joint_pos = Vec::Zero(joints);
  s.joint_vel = Vec::Zero(joints);
  s.prev_action = Vec::Zero(joints);
  return s;
}

bool AgentState::finite() const {
  return root_pos.allFinite() && std::isfinite(root_heading) && root_linvel.allFinite() &&
         std::isfinite(root_angvel) && joint_pos.allFinite() && joint_vel.allFinite() &&
         prev_action.allFinite() && std::isfinite(phase_time);
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double forward_speed(const SimParams& p, const Vec& joint_vel) {
  return p.gain_forward * 0.5 * (joint_vel[0] * p.coupling_sign[0] + joint_vel[1] * p.coupling_sign[1]);
}

double heading_rate(const SimParams& p, const Vec& joint_pos) {
  return p.gain_turn * (joint_pos[2] - joint_pos[3]);
}

Vec pd_torque(const SimParams& p, const Vec& action, const Vec& q, const Vec& qd) {
  return p.kp * (action - q) - p.kd * qd;
}

StepOutcome step_detailed(const SimParams& p, const AgentState& state, const Vec& action) {
  require(action.size() == p.joints, "shape_mismatch", "action has wrong length");
  require(state.joint_pos.size() == p.joints, "shape_mismatch", "state has wrong joint count");

  const Vec target = action.cwiseMax(-p.q_max).cwiseMin(p.q_max);
  const double h = p.substep_dt();

  StepOutcome out{state, Vec::Zero(p.joints)};
  AgentState& s = out.state;
  for (int k = 0; k < p.substeps; ++k) {
    const Vec tau = pd_torque(p, target, s.joint_pos, s.joint_vel);
    out.mean_torque += tau;
    // unit inertia, semi-implicit Euler
    s.joint_vel += h * tau;
    s.joint_pos += h * s.joint_vel;

    const double v_fwd = forward_speed(p, s.joint_vel);
    s.root_angvel = heading_rate(p, s.joint_pos);
    s.root_heading = wrap_angle(s.root_heading + h * s.root_angvel);
    s.root_linvel = v_fwd * Eigen::Vector2d(std::cos(s.root_heading), std::sin(s.root_heading));
    s.root_pos += h * s.root_linvel;
  }
  out.mean_torque /= p.substeps;
  s.prev_action = target;
  s.phase_time += p.control_dt;

  if (!s.finite() || s.root_linvel.norm() > p.max_linvel) {
    throw SimulationDiverged("simulation diverged at t=" + std::to_string(s.phase_time));
  }
  return out;
}

AgentState step(const SimParams& p, const AgentState& state, const Vec& action) {
  return step_detailed(p, state, action).state;
}

bool joint_limit_breached(const SimParams& p, const AgentState& state) {
  return state.joint_pos.cwiseAbs().maxCoeff() > p.q_max + p.limit_slack;
}

Eigen::Vector2d chain_tip(const Vec& joint_pos) {
  Eigen::Vector2d tip = Eigen::Vector2d::Zero();
  double angle = 0.0;
  for (Eigen::Index i = 0; i < joint_pos.size(); ++i) {
    angle += joint_pos[i];
    tip += Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  return tip;
}

int disc_feature_size(int joints) { return 5 + 2 * joints + 2; }
int policy_base_size(int joints) { return 3 * joints + 4; }
int policy_obs_size(int joints, int latent_dim) { return policy_base_size(joints) + latent_dim; }

std::vector<std::string> disc_feature_names(int joints) {
  std::vector<std::string> names{"cos_heading", "sin_heading", "vel_fwd", "vel_lat", "ang_vel"};
  for (int j = 0; j < joints; ++j) names.push_back("q" + std::to_string(j));
  for (int j = 0; j < joints; ++j) names.push_back("qd" + std::to_string(j));
  names.push_back("tip_x");
  names.push_back("tip_y");
  return names;
}

namespace {

Eigen::Vector2d to_body(const AgentState& s) {
  const double c = std::cos(s.root_heading), sn = std::sin(s.root_heading);
  return {c * s.root_linvel.x() + sn * s.root_linvel.y(), -sn * s.root_linvel.x() + c * s.root_linvel.y()};
}

}  // namespace

Vec observe_disc(const AgentState& s) {
  const int J = static_cast<int>(s.joint_pos.size());
  Vec f(disc_feature_size(J));
  const Eigen::Vector2d vb = to_body(s);
  const Eigen::Vector2d tip = chain_tip(s.joint_pos);
  f << std::cos(s.root_heading), std::sin(s.root_heading), vb, s.root_angvel, s.joint_pos, s.joint_vel, tip;
  return f;
}

Vec observe_policy_base(const AgentState& s) {
  const int J = static_cast<int>(s.joint_pos.size());
  Vec o(policy_base_size(J));
  o << s.prev_action, to_body(s), std::cos(s.root_heading), std::sin(s.root_heading), s.joint_pos, s.joint_vel;
  return o;
}

Vec observe_policy(const AgentState& s, const Vec& z) {
  require(z.allFinite(), "non_finite", "latent contains non-finite values");
  Vec base = observe_policy_base(s);
  Vec o(base.size() + z.size());
  o << base, z;
  return o;
}

AgentState reconstruct_from_disc(const SimParams& p, const Vec& f) {
  const int J = p.joints;
  require(f.size() == disc_feature_size(J), "shape_mismatch", "feature vector has wrong length");
  require(f.allFinite(), "reconstruction_infeasible", "feature vector is not finite");
  const double c = f[0], sn = f[1];
  require(std::abs(c * c + sn * sn - 1.0) < 1e-6, "reconstruction_infeasible",
          "heading terms are not a unit vector");

  AgentState s = AgentState::zero(J);
  s.root_heading = wrap_angle(std::atan2(sn, c));
  const double vx = f[2], vy = f[3];
  s.root_linvel = Eigen::Vector2d(c * vx - sn * vy, sn * vx + c * vy);
  s.root_angvel = f[4];
  s.joint_pos = f.segment(5, J);
  s.joint_vel = f.segment(5 + J, J);
  s.prev_action = s.joint_pos.cwiseMax(-p.q_max).cwiseMin(p.q_max);

  require((chain_tip(s.joint_pos) - f.segment<2>(5 + 2 * J)).norm() < 1e-6, "reconstruction_infeasible",
          "chain tip inconsistent with joint angles");
  require(!joint_limit_breached(p, s), "reconstruction_infeasible", "joint angles outside limits");
  return s;
}

}  // namespace skillmix::sim
