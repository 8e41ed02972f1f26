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

#include "skillmix/eval/reports.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace skillmix::eval {

std::string coverage_to_yaml(const CoverageReport& r) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "frequencies" << YAML::Value << YAML::BeginMap;
  for (size_t k = 0; k < r.skills.size(); ++k) {
    out << YAML::Key << r.skills[k].name << YAML::Value << r.frequencies[static_cast<Eigen::Index>(k)];
  }
  out << YAML::EndMap;
  out << YAML::Key << "entropy" << YAML::Value << coverage_entropy(r.frequencies);
  out << YAML::Key << "trajectories" << YAML::Value << r.trajectories;
  out << YAML::Key << "seed" << YAML::Value << r.seed;
  out << YAML::Key << "discarded" << YAML::Value << r.discarded;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string transitions_to_csv(const TransitionMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "source";
  for (const auto& s : m.skills) os << ',' << s.name;
  os << ",samples\n";
  for (size_t r = 0; r < m.skills.size(); ++r) {
    os << m.skills[r].name;
    for (size_t c = 0; c < m.skills.size(); ++c) {
      os << ',' << m.probabilities(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    os << ',' << m.row_counts[r] << '\n';
  }
  return os.str();
}

std::string apd_to_yaml(const ApdReport& r) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "mean" << YAML::Value << r.mean;
  out << YAML::Key << "per_repeat" << YAML::Value << YAML::Flow << r.per_repeat;
  out << YAML::Key << "trajectories" << YAML::Value << r.trajectories;
  out << YAML::Key << "length" << YAML::Value << r.length;
  out << YAML::Key << "discarded" << YAML::Value << r.discarded;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "io_error", "cannot write " + path.string());
  f << text;
}

}  // namespace skillmix::eval
