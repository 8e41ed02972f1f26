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

#include <optional>
#include <string>

#include "skillmix/lang/scoring.hpp"

namespace skillmix::lang {

struct Endpoint {
  std::string scheme_host_port;  // e.g. http://127.0.0.1:9000
  std::string path = "/";

  static Endpoint parse(const std::string& url);
};

/// Config value if non-empty, otherwise CSI_NLI_ENDPOINT, otherwise nothing.
std::optional<std::string> resolve_endpoint(const std::string& configured);

/// Client for an NLI service: POST {premise, hypothesis} returning
/// {entailment, neutral, contradiction}. The entailment probability is the
/// score. Unreachable or slow services fall back to the builtin scorer.
class ExternalScorer : public Scorer {
 public:
  static constexpr int kMaxInFlight = 4;

  explicit ExternalScorer(std::string url, double timeout_seconds = 5.0, const Lexicon* fallback = nullptr);
  EntailmentScores score(const std::string& text, const CaptionSet& captions) const override;

 private:
  Endpoint endpoint_;
  double timeout_;
  BuiltinScorer fallback_;
};

/// Parses one NLI response body; throws backend_error with the raw payload.
double parse_entailment(const std::string& body);

EntailmentScores external_score(const std::string& text, const CaptionSet& captions, const std::string& endpoint);

}  // namespace skillmix::lang
