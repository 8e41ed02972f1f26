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

#include "skillmix/sim/skills.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace skillmix::sim {

namespace {

constexpr double kPi = std::numbers::pi;

SkillProgram make(int id, std::string name, std::string caption, Vec amp, double freq, Vec phase, Vec offset) {
  return SkillProgram{SkillLabel{id, std::move(name), std::move(caption)}, std::move(amp), freq, std::move(phase),
                      std::move(offset)};
}

Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

}  // namespace

SkillTable::SkillTable(std::vector<SkillProgram> programs) : programs_(std::move(programs)) {
  std::set<std::string> captions;
  for (size_t i = 0; i < programs_.size(); ++i) {
    const auto& p = programs_[i];
    require(p.label.skill_id == static_cast<int>(i), "invalid_skill_table", "skill ids must be 0..K-1 in order");
    require(!p.label.caption.empty(), "invalid_skill_table", "skill caption must be non-empty");
    require(captions.insert(p.label.caption).second, "invalid_skill_table", "duplicate caption " + p.label.caption);
    require(p.amplitude.size() == p.phase.size() && p.phase.size() == p.offset.size(), "invalid_skill_table",
            "per-joint parameter lengths differ for " + p.label.name);
    require(p.frequency >= 0.0, "invalid_skill_table", "negative frequency for " + p.label.name);
  }
}

const SkillProgram& SkillTable::program(int skill_id) const {
  require(skill_id >= 0 && skill_id < size(), "unknown_skill", "unknown skill_id " + std::to_string(skill_id));
  return programs_[static_cast<size_t>(skill_id)];
}

std::vector<SkillLabel> SkillTable::labels() const {
  std::vector<SkillLabel> out;
  out.reserve(programs_.size());
  for (const auto& p : programs_) out.push_back(p.label);
  return out;
}

SkillTable SkillTable::subset(const std::vector<std::string>& names) const {
  std::vector<SkillProgram> picked;
  for (const auto& name : names) {
    bool found = false;
    for (const auto& p : programs_) {
      if (p.label.name == name) {
        SkillProgram copy = p;
        copy.label.skill_id = static_cast<int>(picked.size());
        picked.push_back(std::move(copy));
        found = true;
        break;
      }
    }
    require(found, "unknown_skill", "no skill named " + name);
  }
  return SkillTable(std::move(picked));
}

SkillTable default_skill_table() {
  const double r2 = std::numbers::sqrt2;
  return SkillTable({
      make(0, "walk-forward", "Walk Forward", v4(0.4, 0.4, 0, 0), 1.0, v4(0, kPi, 0, 0), v4(0, 0, 0, 0)),
      make(1, "walk-backward", "Walk Backward", v4(0.3, 0.3, 0, 0), 1.4, v4(kPi, 0, 0, 0), v4(-0.3, -0.3, 0, 0)),
      make(2, "run", "Run", v4(1.4, 1.4, 0, 0), 2.0, v4(0, kPi, 0, 0), v4(0, 0, 0, 0)),
      make(3, "turn-left", "Turn Left", v4(0.3, 0.3, 0, 0), 1.0, v4(0, kPi, 0, 0), v4(0, 0, 0.3, -0.3)),
      make(4, "turn-right", "Turn Right", v4(0.3, 0.3, 0, 0), 1.0, v4(0, kPi, 0, 0), v4(0, 0, -0.3, 0.3)),
      make(5, "idle", "Stand Still", v4(0, 0, 0, 0), 0.0, v4(0, 0, 0, 0), v4(0, 0, 0, 0)),
      make(6, "dance", "Dance", v4(0.3, 0.3, 0.3, 0.3), 0.8, v4(0, kPi / r2, kPi / std::numbers::phi, kPi / r2),
           v4(0, 0, 0, 0)),
      make(7, "wave", "Wave Hello", v4(0, 0, 0.5, 0), 1.5, v4(0, 0, 0, 0), v4(0, 0, 0, 0)),
  });
}

SkillTable four_skill_table() {
  return default_skill_table().subset({"walk-forward", "walk-backward", "turn-left", "idle"});
}

Vec scripted_expert(const SkillTable& table, int skill_id, double t) {
  const SkillProgram& p = table.program(skill_id);
  Vec target(p.amplitude.size());
  for (Eigen::Index j = 0; j < target.size(); ++j) {
    target[j] = p.amplitude[j] * std::sin(2.0 * kPi * p.frequency * t + p.phase[j]) + p.offset[j];
  }
  return target;
}

}  // namespace skillmix::sim
