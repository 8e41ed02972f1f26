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

#include <string>
#include <vector>

#include "skillmix/common.hpp"

namespace skillmix::sim {

struct SkillLabel {
  int skill_id = 0;
  std::string name;
  std::string caption;

  bool operator==(const SkillLabel&) const = default;
};

/// Sinusoidal joint-target program: target_j = A_j sin(2 pi f t + phi_j) + b_j.
struct SkillProgram {
  SkillLabel label;
  Vec amplitude;
  double frequency = 0.0;
  Vec phase;
  Vec offset;
};

class SkillTable {
 public:
  SkillTable() = default;
  explicit SkillTable(std::vector<SkillProgram> programs);

  int size() const { return static_cast<int>(programs_.size()); }
  const SkillProgram& program(int skill_id) const;
  std::vector<SkillLabel> labels() const;
  const std::vector<SkillProgram>& programs() const { return programs_; }

  /// Keeps only the named skills, renumbering ids densely in the given order.
  SkillTable subset(const std::vector<std::string>& names) const;

 private:
  std::vector<SkillProgram> programs_;
};

/// The 8-skill default table (walk-forward, walk-backward, run, turn-left,
/// turn-right, idle, dance, wave).
SkillTable default_skill_table();

/// The 4-skill training task: walk-forward, walk-backward, turn-left, idle.
SkillTable four_skill_table();

/// Joint targets of the scripted expert for `skill_id` at time t.
Vec scripted_expert(const SkillTable& table, int skill_id, double t);

}  // namespace skillmix::sim
