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

#include <memory>
#include <string>

#include "skillmix/lang/scoring.hpp"

namespace skillmix::lang {

/// Index of the highest score, ties to the lowest index. Throws no_route when
/// every score is zero or the best one is below min_score.
int argmax_route(const Vec& scores, double min_score = 0.0);

struct RouteResult {
  int skill_id = 0;
  EntailmentScores scores;
};

RouteResult route_command(const std::string& text, const CaptionSet& captions, const Scorer& scorer,
                          double min_score = 0.0);

/// External backend when an endpoint resolves, builtin otherwise.
std::unique_ptr<Scorer> make_scorer(const std::string& configured_endpoint);

}  // namespace skillmix::lang
