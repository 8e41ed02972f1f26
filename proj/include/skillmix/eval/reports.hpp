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

#include <filesystem>
#include <string>

#include "skillmix/eval/protocols.hpp"

namespace skillmix::eval {

/// Skill name to frequency, plus run metadata.
std::string coverage_to_yaml(const CoverageReport& report);
/// K x K matrix with a header row of destination names and a leading source column.
std::string transitions_to_csv(const TransitionMatrix& matrix);
std::string apd_to_yaml(const ApdReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace skillmix::eval
