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

#include "skillmix/nn/checkpoint.hpp"

#include <fstream>

namespace skillmix::nn {

using nlohmann::json;

json spec_to_json(const NetworkSpec& spec) {
  return json{{"layer_sizes", spec.layer_sizes},
              {"hidden_activation", to_string(spec.hidden_activation)},
              {"output_activation", to_string(spec.output_activation)},
              {"seed", spec.seed}};
}

NetworkSpec spec_from_json(const json& j) {
  NetworkSpec s;
  s.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  s.hidden_activation = parse_activation(j.at("hidden_activation").get<std::string>());
  s.output_activation = parse_output_activation(j.at("output_activation").get<std::string>());
  s.seed = j.at("seed").get<uint64_t>();
  return s;
}

json checkpoint_to_json(const Checkpoint& ckpt) {
  const auto& p = ckpt.network.params();
  json layers = json::array();
  for (size_t l = 0; l < p.weights.size(); ++l) {
    const Mat& w = p.weights[l];
    std::vector<double> values;
    values.reserve(static_cast<size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) values.push_back(w(r, c));
    layers.push_back({{"name", "W" + std::to_string(l)}, {"shape", {w.rows(), w.cols()}}, {"values", values}});
    const Vec& b = p.biases[l];
    layers.push_back({{"name", "b" + std::to_string(l)},
                      {"shape", {b.size()}},
                      {"values", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  return json{{"format_version", kCheckpointFormatVersion},
              {"role", ckpt.role},
              {"spec", spec_to_json(ckpt.network.spec())},
              {"layers", layers},
              {"metadata", ckpt.metadata}};
}

Checkpoint checkpoint_from_json(const json& doc) {
  try {
    require(doc.at("format_version").get<int>() == kCheckpointFormatVersion, "checkpoint_format",
            "unsupported checkpoint format_version");
    Checkpoint ckpt;
    ckpt.role = doc.at("role").get<std::string>();
    if (doc.contains("metadata")) ckpt.metadata = doc.at("metadata");
    NetworkSpec spec = spec_from_json(doc.at("spec"));
    const auto& layers = doc.at("layers");
    require(layers.size() == 2 * static_cast<size_t>(spec.num_layers()), "checkpoint_format",
            "layer count does not match spec");
    NetworkParameters params;
    for (size_t i = 0; i < layers.size(); i += 2) {
      const auto& wj = layers[i];
      const auto& bj = layers[i + 1];
      const auto shape = wj.at("shape").get<std::vector<Eigen::Index>>();
      const auto wv = wj.at("values").get<std::vector<double>>();
      require(shape.size() == 2 && static_cast<Eigen::Index>(wv.size()) == shape[0] * shape[1], "checkpoint_format",
              "weight shape/value mismatch in " + wj.at("name").get<std::string>());
      Mat w(shape[0], shape[1]);
      size_t k = 0;
      for (Eigen::Index r = 0; r < shape[0]; ++r)
        for (Eigen::Index c = 0; c < shape[1]; ++c) w(r, c) = wv[k++];
      const auto bv = bj.at("values").get<std::vector<double>>();
      params.weights.push_back(std::move(w));
      params.biases.push_back(Eigen::Map<const Vec>(bv.data(), static_cast<Eigen::Index>(bv.size())));
    }
    ckpt.network = Mlp(std::move(spec), std::move(params));
    return ckpt;
  } catch (const json::exception& e) {
    throw Error("checkpoint_format", std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "io_error", "cannot write " + path.string());
  out << checkpoint_to_json(ckpt).dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "io_error", "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("checkpoint_format", path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace skillmix::nn
