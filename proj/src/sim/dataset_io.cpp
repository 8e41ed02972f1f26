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

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "skillmix/sim/dataset.hpp"

namespace skillmix::sim {

namespace {

constexpr int kManifestVersion = 1;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size(), "parse_error",
          "bad number '" + s + "' in " + where);
  return v;
}

std::string clip_file_name(size_t index, const MotionClip& clip) {
  std::ostringstream os;
  os << "clip_" << index << "_" << clip.skill.name << ".csv";
  return os.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::string clip_to_csv(const MotionClip& clip) {
  const int J = (static_cast<int>(clip.frames.front().size()) - 7) / 2;
  std::string out;
  const auto names = disc_feature_names(J);
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  for (const auto& f : clip.frames) {
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += format_double(f[i]);
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const ReferenceDataset& dataset, const std::filesystem::path& dir) {
  require(!dataset.empty(), "invalid_dataset", "cannot save an empty dataset");
  std::filesystem::create_directories(dir);
  const int J = (dataset.feature_size() - 7) / 2;

  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "version" << YAML::Value << kManifestVersion;
  y << YAML::Key << "dt" << YAML::Value << format_double(dataset.clips().front().dt);
  y << YAML::Key << "feature_order" << YAML::Value << YAML::Flow << disc_feature_names(J);
  y << YAML::Key << "skills" << YAML::Value << YAML::BeginSeq;
  for (size_t c = 0; c < dataset.clips().size(); ++c) {
    const MotionClip& clip = dataset.clips()[c];
    const std::string file = clip_file_name(c, clip);
    y << YAML::BeginMap;
    y << YAML::Key << "skill_id" << YAML::Value << clip.skill.skill_id;
    y << YAML::Key << "name" << YAML::Value << clip.skill.name;
    y << YAML::Key << "caption" << YAML::Value << clip.skill.caption;
    y << YAML::Key << "file" << YAML::Value << file;
    y << YAML::Key << "frames" << YAML::Value << clip.frames.size();
    y << YAML::EndMap;

    std::ofstream csv(dir / file, std::ios::binary);
    require(static_cast<bool>(csv), "io_error", "cannot write " + (dir / file).string());
    csv << clip_to_csv(clip);
  }
  y << YAML::EndSeq << YAML::EndMap;

  std::ofstream manifest(dir / "manifest.yaml", std::ios::binary);
  require(static_cast<bool>(manifest), "io_error", "cannot write manifest in " + dir.string());
  manifest << y.c_str() << '\n';
}

ReferenceDataset load_dataset(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.yaml";
  require(std::filesystem::exists(manifest_path), "io_error", "missing " + manifest_path.string());
  YAML::Node m;
  try {
    m = YAML::LoadFile(manifest_path.string());
  } catch (const YAML::Exception& e) {
    throw Error("parse_error", "manifest: " + std::string(e.what()));
  }
  require(m["version"] && m["version"].as<int>() == kManifestVersion, "parse_error", "unsupported manifest version");
  const double dt = parse_double(m["dt"].as<std::string>(), "manifest dt");
  const auto order = m["feature_order"].as<std::vector<std::string>>();

  std::map<int, SkillLabel> labels;
  std::vector<MotionClip> clips;
  for (const auto& entry : m["skills"]) {
    MotionClip clip;
    clip.dt = dt;
    clip.skill.skill_id = entry["skill_id"].as<int>();
    clip.skill.name = entry["name"].as<std::string>();
    clip.skill.caption = entry["caption"].as<std::string>();
    const auto file = entry["file"].as<std::string>();
    const auto expected_frames = entry["frames"].as<size_t>();

    std::ifstream csv(dir / file, std::ios::binary);
    require(static_cast<bool>(csv), "io_error", "cannot read " + (dir / file).string());
    std::string line;
    std::getline(csv, line);
    require(split(line, ',') == order, "parse_error", file + ": header does not match feature_order");
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      require(cells.size() == order.size(), "parse_error", file + ": wrong column count");
      Vec f(static_cast<Eigen::Index>(cells.size()));
      for (size_t i = 0; i < cells.size(); ++i) f[static_cast<Eigen::Index>(i)] = parse_double(cells[i], file);
      clip.frames.push_back(std::move(f));
    }
    require(clip.frames.size() == expected_frames, "parse_error", file + ": frame count differs from manifest");
    auto [it, inserted] = labels.emplace(clip.skill.skill_id, clip.skill);
    require(inserted || it->second == clip.skill, "parse_error", "conflicting labels for one skill_id");
    clips.push_back(std::move(clip));
  }
  std::vector<SkillLabel> skills;
  for (auto& [id, label] : labels) skills.push_back(label);
  return ReferenceDataset(std::move(skills), std::move(clips));
}

}  // namespace skillmix::sim
