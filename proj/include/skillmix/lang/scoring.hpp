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
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "skillmix/sim/skills.hpp"

namespace skillmix::lang {

struct Caption {
  int skill_id = 0;
  std::string text;
};

/// Ordered hypothesis set, one caption per skill.
class CaptionSet {
 public:
  CaptionSet() = default;
  explicit CaptionSet(std::vector<Caption> captions);
  static CaptionSet from_labels(const std::vector<sim::SkillLabel>& labels);

  const std::vector<Caption>& captions() const { return captions_; }
  int size() const { return static_cast<int>(captions_.size()); }
  const Caption& operator[](int i) const { return captions_[static_cast<size_t>(i)]; }

 private:
  std::vector<Caption> captions_;
};

enum class Backend { builtin, external };
std::string to_string(Backend b);

struct EntailmentScores {
  Vec scores;  // one per caption, in [0, 1]
  Backend backend = Backend::builtin;
  std::vector<std::string> warnings;
};

/// Stopwords and word -> canonical token map.
class Lexicon {
 public:
  Lexicon() = default;
  static Lexicon load(const std::filesystem::path& path);
  /// The shipped fixture, or the file named by SKILLMIX_SYNONYMS.
  static const Lexicon& shipped();

  /// Lowercased alphanumeric tokens, stopwords dropped, synonyms canonicalized.
  std::set<std::string> tokens(const std::string& text) const;
  int version() const { return version_; }

 private:
  int version_ = 0;
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, std::string> canonical_;
};

/// Scoring backend. Implementations are stateless and safe to share.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual EntailmentScores score(const std::string& text, const CaptionSet& captions) const = 0;
};

/// Jaccard similarity between canonical token sets.
class BuiltinScorer : public Scorer {
 public:
  BuiltinScorer() : lexicon_(&Lexicon::shipped()) {}
  explicit BuiltinScorer(const Lexicon& lexicon) : lexicon_(&lexicon) {}
  EntailmentScores score(const std::string& text, const CaptionSet& captions) const override;

 private:
  const Lexicon* lexicon_;
};

EntailmentScores builtin_score(const std::string& text, const CaptionSet& captions);

}  // namespace skillmix::lang
