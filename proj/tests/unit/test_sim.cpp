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
#include "skillmix/sim/dataset.hpp"

using namespace skillmix;
using namespace skillmix::sim;

TEST_CASE("pd torque at rest toward target 0.5") {
  SimParams p;
  const Vec a = Vec::Constant(4, 0.5);
  const Vec tau = pd_torque(p, a, Vec::Zero(4), Vec::Zero(4));
  CHECK(tau[0] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("holding the current pose at rest changes nothing") {
  SimParams p;
  AgentState s = AgentState::zero(4);
  s.joint_pos << 0.3, -0.2, 0.1, 0.4;
  const StepOutcome out = step_detailed(p, s, s.joint_pos);
  CHECK(out.state.joint_pos == s.joint_pos);
  CHECK(out.state.joint_vel == Vec::Zero(4));
  CHECK(out.mean_torque == Vec::Zero(4));
}

TEST_CASE("gait coupling forward speed") {
  SimParams p;
  Vec qd(4);
  qd << 1, -1, 0, 0;
  CHECK(forward_speed(p, qd) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("step is deterministic") {
  SimParams p;
  AgentState s = AgentState::zero(4);
  s.joint_vel << 0.5, -0.3, 0.2, 0.1;
  Vec a(4);
  a << 0.2, -0.4, 0.6, -0.1;
  CHECK(step(p, s, a) == step(p, s, a));
}

TEST_CASE("step clamps targets and advances bookkeeping") {
  SimParams p;
  const AgentState s = AgentState::zero(4);
  const AgentState n = step(p, s, Vec::Constant(4, 5.0));
  CHECK(n.prev_action == Vec::Constant(4, p.q_max));
  CHECK(n.phase_time == doctest::Approx(0.02));
}

TEST_CASE("kinetic proxy does not grow under zero targets from the zero pose") {
  SimParams p;
  p.substeps = 1;
  p.control_dt = 0.005;
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    AgentState s = AgentState::zero(4);
    s.joint_vel = testing::random_vec(rng, 4);
    double prev = s.joint_vel.squaredNorm();
    for (int sub = 0; sub < 4; ++sub) {
      s = step(p, s, Vec::Zero(4));
      const double ke = s.joint_vel.squaredNorm();
      CHECK(ke <= prev);
      prev = ke;
    }
  }
}

TEST_CASE("divergence raises") {
  SimParams p;
  AgentState s = AgentState::zero(4);
  s.joint_vel << 1e4, -1e4, 0, 0;
  CHECK_THROWS_AS(step(p, s, Vec::Zero(4)), SimulationDiverged);
  s.joint_vel[0] = std::nan("");
  CHECK_THROWS_AS(step(p, s, Vec::Zero(4)), SimulationDiverged);
}

TEST_CASE("joint limit breach needs the slack") {
  SimParams p;
  AgentState s = AgentState::zero(4);
  s.joint_pos[1] = 1.65;
  CHECK_FALSE(joint_limit_breached(p, s));
  s.joint_pos[1] = -1.75;
  CHECK(joint_limit_breached(p, s));
}

TEST_CASE("heading wraps into (-pi, pi]") {
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
}

TEST_CASE("discriminator features of the stand state") {
  const Vec f = observe_disc(AgentState::zero(4));
  REQUIRE(f.size() == 15);
  CHECK(disc_feature_size(4) == 15);
  Vec expected = Vec::Zero(15);
  expected[0] = 1.0;
  expected[13] = 4.0;  // straight chain of four unit links
  CHECK(f == expected);
  CHECK(disc_feature_names(4).size() == 15);
}

TEST_CASE("chain tip follows cumulative link angles") {
  Vec q(4);
  q << 0.3, -0.1, 0.5, 0.2;
  double x = 0, y = 0, angle = 0;
  for (int i = 0; i < 4; ++i) {
    angle += q[i];
    x += std::cos(angle);
    y += std::sin(angle);
  }
  const Eigen::Vector2d tip = chain_tip(q);
  CHECK(tip.x() == doctest::Approx(x).epsilon(1e-12));
  CHECK(tip.y() == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("features are invariant to world rotation apart from heading terms") {
  AgentState a = AgentState::zero(4);
  a.joint_pos << 0.1, -0.2, 0.3, 0.05;
  a.joint_vel << 0.5, 0.4, -0.3, 0.2;
  a.root_heading = 0.4;
  a.root_linvel = Eigen::Vector2d(std::cos(0.4), std::sin(0.4)) * 0.7;
  a.root_angvel = 0.3;
  AgentState b = a;
  b.root_heading = -1.9;
  b.root_linvel = Eigen::Vector2d(std::cos(-1.9), std::sin(-1.9)) * 0.7;
  b.root_pos = Eigen::Vector2d(5.0, -3.0);
  const Vec fa = observe_disc(a), fb = observe_disc(b);
  CHECK((fa.tail(13) - fb.tail(13)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fa[0] != fb[0]);
}

TEST_CASE("policy observation layout") {
  const AgentState s = AgentState::zero(4);
  const Vec o = observe_policy(s, Vec::Zero(8));
  REQUIRE(o.size() == 24);
  CHECK(policy_obs_size(4, 8) == 24);
  Vec expected = Vec::Zero(24);
  expected[6] = 1.0;  // cos heading after prev_action and body velocity
  CHECK(o == expected);

  Vec z = Vec::LinSpaced(8, 1.0, 8.0);
  const Vec o2 = observe_policy(s, z);
  CHECK(o2.head(16) == o.head(16));
  CHECK(o2.tail(8) == z);
}

TEST_CASE("scripted expert programs") {
  const SkillTable table = default_skill_table();
  REQUIRE(table.size() == 8);
  const int idle = 5, walk = 0;
  CHECK(table.program(idle).label.name == "idle");
  for (double t : {0.0, 0.37, 2.5}) CHECK(scripted_expert(table, idle, t) == Vec::Zero(4));

  const Vec w = scripted_expert(table, walk, 0.25);
  CHECK(w[0] == doctest::Approx(0.4));
  CHECK(w[1] == doctest::Approx(-0.4));
  CHECK(w[2] == doctest::Approx(0.0));
  CHECK(w[3] == doctest::Approx(0.0));

  for (const auto& prog : table.programs()) {
    if (prog.frequency <= 0) continue;
    const double period = 1.0 / prog.frequency;
    for (double t : {0.0, 0.13, 1.7}) {
      const Vec a = scripted_expert(table, prog.label.skill_id, t);
      const Vec b = scripted_expert(table, prog.label.skill_id, t + period);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  CHECK_THROWS_AS(scripted_expert(table, 8, 0.0), Error);
}

TEST_CASE("skill table subset renumbers ids") {
  const SkillTable four = four_skill_table();
  REQUIRE(four.size() == 4);
  CHECK(four.program(0).label.name == "walk-forward");
  CHECK(four.program(1).label.name == "walk-backward");
  CHECK(four.program(2).label.name == "turn-left");
  CHECK(four.program(3).label.name == "idle");
  for (int k = 0; k < 4; ++k) CHECK(four.program(k).label.skill_id == k);
}

namespace {
const ReferenceDataset& default_dataset() {
  static const ReferenceDataset ds = generate_reference_dataset(SimParams{}, DatasetConfig{});
  return ds;
}
}  // namespace

TEST_CASE("dataset size for eight five-second clips") {
  const ReferenceDataset& ds = default_dataset();
  CHECK(ds.clips().size() == 8);
  for (const auto& c : ds.clips()) CHECK(c.frames.size() == 250);
  CHECK(ds.transition_index().size() == 8 * 249);
  CHECK(ds.feature_size() == 15);
}

TEST_CASE("dataset regeneration is identical") {
  const ReferenceDataset again = generate_reference_dataset(SimParams{}, DatasetConfig{});
  CHECK(again == default_dataset());
  for (size_t c = 0; c < again.clips().size(); ++c) {
    CHECK(clip_to_csv(again.clips()[c]) == clip_to_csv(default_dataset().clips()[c]));
  }
}

TEST_CASE("idle clip is settled") {
  const MotionClip& idle = default_dataset().clips()[5];
  REQUIRE(idle.skill.name == "idle");
  for (size_t t = 50; t < idle.frames.size(); ++t) CHECK(idle.frames[t].segment(9, 4).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("reference frames stay inside joint limits") {
  for (const auto& clip : default_dataset().clips()) {
    for (const Vec& f : clip.frames) CHECK(f.segment(5, 4).cwiseAbs().maxCoeff() <= 1.5);
  }
}

TEST_CASE("reconstruction inverts the feature map on reference frames") {
  SimParams p;
  for (const auto& clip : default_dataset().clips()) {
    for (const Vec& f : clip.frames) {
      const AgentState s = reconstruct_from_disc(p, f);
      CHECK((observe_disc(s) - f).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(s.root_pos == Eigen::Vector2d::Zero());
    }
  }
}

TEST_CASE("reconstruction rejects inconsistent features") {
  SimParams p;
  Vec f = observe_disc(AgentState::zero(4));
  f[13] = 3.0;
  CHECK_THROWS_AS(reconstruct_from_disc(p, f), Error);
  f = observe_disc(AgentState::zero(4));
  f[0] = 0.5;
  CHECK_THROWS_AS(reconstruct_from_disc(p, f), Error);
}

TEST_CASE("reference clips replay exactly") {
  SimParams p;
  const SkillTable table = default_skill_table();
  for (const auto& clip : default_dataset().clips()) {
    const SkillProgram& prog = table.program(clip.skill.skill_id);
    AgentState s = cycle_start(p, prog);
    CHECK(observe_disc(s) == clip.frames[0]);
    for (size_t t = 1; t < clip.frames.size(); ++t) {
      s = step(p, s, scripted_expert(table, prog.label.skill_id, s.phase_time));
      REQUIRE(observe_disc(s) == clip.frames[t]);
    }
  }
}

TEST_CASE("dataset files round trip") {
  const auto dir = testing::temp_dir("dataset_io");
  save_dataset(default_dataset(), dir);
  const ReferenceDataset loaded = load_dataset(dir);
  CHECK(loaded == default_dataset());

  std::ifstream csv(dir / "clip_0_walk-forward.csv");
  std::string header;
  std::getline(csv, header);
  std::string expected;
  for (const auto& n : disc_feature_names(4)) expected += (expected.empty() ? "" : ",") + n;
  CHECK(header == expected);

  const auto again = testing::temp_dir("dataset_io_again");
  save_dataset(loaded, again);
  std::ifstream a(dir / "manifest.yaml"), b(again / "manifest.yaml");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("feature_order") != std::string::npos);
}

TEST_CASE("dataset loader rejects a truncated clip") {
  const auto dir = testing::temp_dir("dataset_bad");
  save_dataset(default_dataset(), dir);
  std::ofstream(dir / "clip_0_walk-forward.csv", std::ios::trunc) << "cos_heading\n1\n";
  CHECK_THROWS_AS(load_dataset(dir), Error);
}

TEST_CASE("default reset is the stand state") {
  SimParams p;
  Rng rng(1);
  const auto& ds = default_dataset();
  for (int i = 0; i < 20; ++i) {
    const ResetResult r = reset(p, ResetMode::default_state, ds, ds.skills(), rng);
    CHECK(r.state == AgentState::zero(4));
    CHECK_FALSE(r.from_reference);
  }
}

TEST_CASE("mixed reset fractions and label marginal") {
  SimParams p;
  Rng rng(7);
  const auto& ds = default_dataset();
  const int n = 10000, K = ds.num_skills();
  int from_ref = 0;
  std::vector<int> counts(static_cast<size_t>(K), 0);
  for (int i = 0; i < n; ++i) {
    const ResetResult r = reset(p, ResetMode::mixed, ds, ds.skills(), rng);
    from_ref += r.from_reference ? 1 : 0;
    ++counts[static_cast<size_t>(r.skill.skill_id)];
    if (!r.from_reference) CHECK(r.state == AgentState::zero(4));
  }
  CHECK(std::abs(from_ref / double(n) - 0.7) <= 0.02);
  const double expected = n / double(K);
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < testing::chi2_critical_01(K - 1));
}

TEST_CASE("reset mode names") {
  CHECK(parse_reset_mode("mixed") == ResetMode::mixed);
  CHECK(parse_reset_mode("default") == ResetMode::default_state);
  CHECK(parse_reset_mode("from_reference") == ResetMode::from_reference);
  CHECK_THROWS_AS(parse_reset_mode("sideways"), Error);
}
