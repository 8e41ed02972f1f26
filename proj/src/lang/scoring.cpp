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

#include "skillmix/lang/scoring.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace skillmix::lang {

CaptionSet::CaptionSet(std::vector<Caption> captions) : captions_(std::move(captions)) {
  require(!captions_.empty(), "invalid_captions", "caption set is empty");
  std::unordered_set<std::string> seen;
  for (const auto& c : captions_) {
    require(!c.text.empty(), "invalid_captions", "caption text must be non-empty");
    require(seen.insert(c.text).second, "invalid_captions", "duplicate caption: " + c.text);
  }
}

CaptionSet CaptionSet::from_labels(const std::vector<sim::SkillLabel>& labels) {
  std::vector<Caption> out;
  for (const auto& l : labels) out.push_back({l.skill_id, l.caption});
  return CaptionSet(std::move(out));
}

std::string to_string(Backend b) { return b == Backend::builtin ? "builtin" : "external"; }

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "io_error", "cannot open lexicon " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", path.string() + ": " + e.what());
  }
  Lexicon lex;
  lex.version_ = j.at("version").get<int>();
  for (const auto& w : j.at("stopwords")) lex.stopwords_.insert(w.get<std::string>());
  for (const auto& [canon, variants] : j.at("synonyms").items()) {
    lex.canonical_[canon] = canon;
    for (const auto& v : variants) lex.canonical_[v.get<std::string>()] = canon;
  }
  return lex;
}

const Lexicon& Lexicon::shipped() {
  static const Lexicon lex = [] {
    const char* env = std::getenv("SKILLMIX_SYNONYMS");
    return load(env && *env ? std::filesystem::path(env)
                            : std::filesystem::path(SKILLMIX_FIXTURE_DIR) / "synonyms.json");
  }();
  return lex;
}

std::set<std::string> Lexicon::tokens(const std::string& text) const {
  std::set<std::string> out;
  auto add = [&](const std::string& word) {
    if (word.empty() || stopwords_.count(word)) return;
    auto it = canonical_.find(word);
    out.insert(it == canonical_.end() ? word : it->second);
  };
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (word.find('\'') != std::string::npos && !stopwords_.count(word) && !canonical_.count(word)) {
      size_t start = 0;
      for (size_t i = 0; i <= word.size(); ++i) {
        if (i == word.size() || word[i] == '\'') {
          add(word.substr(start, i - start));
          start = i + 1;
        }
      }
    } else {
      add(word);
    }
    word.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '\'') {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

EntailmentScores BuiltinScorer::score(const std::string& text, const CaptionSet& captions) const {
  require(!text.empty(), "invalid_argument", "command text is empty");
  const std::set<std::string> query = lexicon_->tokens(text);
  EntailmentScores out;
  out.backend = Backend::builtin;
  out.scores = Vec::Zero(captions.size());
  for (int i = 0; i < captions.size(); ++i) {
    const std::set<std::string> cap = lexicon_->tokens(captions[i].text);
    size_t inter = 0;
    for (const auto& t : query) inter += cap.count(t);
    const size_t uni = query.size() + cap.size() - inter;
    out.scores[i] = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  return out;
}

EntailmentScores builtin_score(const std::string& text, const CaptionSet& captions) {
  return BuiltinScorer().score(text, captions);
}

}  // namespace skillmix::lang
