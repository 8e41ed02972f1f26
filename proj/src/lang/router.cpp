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

#include "skillmix/lang/router.hpp"

#include "skillmix/lang/external.hpp"

namespace skillmix::lang {

int argmax_route(const Vec& scores, double min_score) {
  require(scores.size() > 0, "invalid_argument", "no captions to route to");
  require(scores.allFinite(), "invalid_argument", "scores must be finite");
  int best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  if (scores[best] <= 0.0) throw Error("no_route", "no caption scored above zero");
  if (scores[best] < min_score) throw Error("no_route", "best caption score is below the routing threshold");
  return best;
}

RouteResult route_command(const std::string& text, const CaptionSet& captions, const Scorer& scorer,
                          double min_score) {
  require(captions.size() > 0, "invalid_argument", "caption set is empty");
  RouteResult r;
  r.scores = scorer.score(text, captions);
  r.skill_id = captions[argmax_route(r.scores.scores, min_score)].skill_id;
  return r;
}

std::unique_ptr<Scorer> make_scorer(const std::string& configured_endpoint) {
  if (auto url = resolve_endpoint(configured_endpoint)) return std::make_unique<ExternalScorer>(*url);
  return std::make_unique<BuiltinScorer>();
}

}  // namespace skillmix::lang
