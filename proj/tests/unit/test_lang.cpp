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

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "helpers.hpp"
#include "skillmix/lang/external.hpp"
#include "skillmix/lang/router.hpp"
#include "skillmix/lang/scoring.hpp"

// after Eigen: resolv.h defines a _res macro
#include <httplib.h>
#include <json.hpp>

using namespace skillmix;
using namespace skillmix::lang;

namespace {

CaptionSet captions(const std::vector<std::string>& texts) {
  std::vector<Caption> c;
  for (size_t i = 0; i < texts.size(); ++i) c.push_back({static_cast<int>(i), texts[i]});
  return CaptionSet(c);
}

CaptionSet default_captions() { return CaptionSet::from_labels(sim::default_skill_table().labels()); }

// Local NLI stand-in. The handler decides each reply; the server records the
// peak number of concurrent requests.
class MockNli {
 public:
  using Handler = std::function<void(const nlohmann::json&, httplib::Response&)>;

  explicit MockNli(Handler handler, int delay_ms = 0) : handler_(std::move(handler)), delay_ms_(delay_ms) {
    server_.Post("/nli", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++in_flight_;
      int seen = peak_.load();
      while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
      }
      ++requests_;
      if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
      handler_(nlohmann::json::parse(req.body), res);
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockNli() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/nli"; }
  int peak() const { return peak_.load(); }
  int requests() const { return requests_.load(); }

 private:
  httplib::Server server_;
  Handler handler_;
  int delay_ms_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> in_flight_{0}, peak_{0}, requests_{0};
};

void reply(httplib::Response& res, double e) {
  const double rest = 1.0 - e;
  res.set_content(nlohmann::json{{"entailment", e}, {"neutral", rest / 2}, {"contradiction", rest / 2}}.dump(),
                  "application/json");
}

// Entails when the hypothesis word appears, lowercased, in the premise.
void keyword_entailment(const nlohmann::json& req, httplib::Response& res) {
  std::string premise = req.at("premise"), hyp = req.at("hypothesis");
  std::transform(premise.begin(), premise.end(), premise.begin(), ::tolower);
  std::transform(hyp.begin(), hyp.end(), hyp.begin(), ::tolower);
  reply(res, premise.find(hyp) != std::string::npos ? 0.9 : 0.05);
}

}  // namespace

TEST_CASE("caption identical to the text scores one and strictly highest") {
  const CaptionSet c = default_captions();
  for (int i = 0; i < c.size(); ++i) {
    const EntailmentScores s = builtin_score(c[i].text, c);
    CHECK(s.scores[i] == 1.0);
    for (int j = 0; j < c.size(); ++j)
      if (j != i) CHECK(s.scores[j] < 1.0);
    CHECK(s.backend == Backend::builtin);
  }
}

TEST_CASE("token overlap by hand") {
  // "please walk forward now": please/now are stopwords, so {walk, forward}
  const CaptionSet c = captions({"Walk Forward", "Walk Backward", "Idle"});
  const EntailmentScores s = builtin_score("please walk forward now", c);
  CHECK(s.scores[0] == 1.0);
  CHECK(s.scores[1] == doctest::Approx(1.0 / 3.0));
  CHECK(s.scores[2] == 0.0);
}

TEST_CASE("no overlap gives zero scores and no route") {
  const CaptionSet c = default_captions();
  const EntailmentScores s = builtin_score("xyzzy plugh", c);
  CHECK(s.scores.cwiseAbs().maxCoeff() == 0.0);
  try {
    route_command("xyzzy plugh", c, BuiltinScorer());
    FAIL("expected no_route");
  } catch (const Error& e) {
    CHECK(e.code() == "no_route");
  }
}

TEST_CASE("builtin scores are case-insensitive, deterministic and in range") {
  const CaptionSet c = default_captions();
  for (const std::string t : {"Please Walk FORWARD", "say Hello", "Dance like a zombie"}) {
    std::string upper = t;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    const Vec a = builtin_score(t, c).scores, b = builtin_score(upper, c).scores;
    CHECK(a == b);
    CHECK(a == builtin_score(t, c).scores);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() <= 1.0);
  }
}

TEST_CASE("synonym table canonicalizes paraphrases") {
  const Lexicon& lex = Lexicon::shipped();
  CHECK(lex.version() == 1);
  CHECK(lex.tokens("jumping") == lex.tokens("jump"));
  CHECK(lex.tokens("hello") == lex.tokens("wave"));
  CHECK(lex.tokens("scary") == lex.tokens("zombie"));
  CHECK(lex.tokens("the").empty());
}

TEST_CASE("jumping command routes to the jump caption with the builtin scorer") {
  const CaptionSet c = captions({"Walk", "Jump", "Zombie", "Wave"});
  CHECK(route_command("Show me your jumping skills", c, BuiltinScorer()).skill_id == 1);
  CHECK(route_command("act scary", c, BuiltinScorer()).skill_id == 2);
  CHECK(route_command("hello there", c, BuiltinScorer()).skill_id == 3);
}

TEST_CASE("paraphrase fixture routes at least 80 percent correctly") {
  std::ifstream in(std::string(SKILLMIX_FIXTURE_DIR) + "/paraphrases.json");
  REQUIRE(in.good());
  const nlohmann::json fx = nlohmann::json::parse(in);
  const CaptionSet c = default_captions();
  const auto labels = sim::default_skill_table().labels();
  int correct = 0, total = 0;
  for (const auto& item : fx.at("cases")) {
    ++total;
    try {
      const int id = route_command(item.at("text"), c, BuiltinScorer()).skill_id;
      correct += labels[static_cast<size_t>(id)].name == item.at("target").get<std::string>() ? 1 : 0;
    } catch (const Error&) {
    }
  }
  CHECK(total == 20);
  CHECK(correct >= 16);
}

TEST_CASE("argmax routing contracts") {
  CHECK(argmax_route((Vec(3) << 0.1, 0.9, 0.3).finished()) == 1);
  CHECK(argmax_route((Vec(5) << 0.1, 0.2, 0.8, 0.3, 0.8).finished()) == 2);
  CHECK_THROWS_AS(argmax_route(Vec::Zero(4)), Error);
  CHECK_THROWS_AS(argmax_route((Vec(2) << 0.2, 0.1).finished(), 0.5), Error);
  CHECK(argmax_route((Vec(2) << 0.2, 0.6).finished(), 0.5) == 1);
}

TEST_CASE("argmax routing exhaustively on a score grid") {
  // every vector over {0, 0.5, 1}^4 against a first-maximum oracle
  const double levels[] = {0.0, 0.5, 1.0};
  for (int code = 0; code < 81; ++code) {
    Vec s(4);
    int c = code;
    for (int i = 0; i < 4; ++i, c /= 3) s[i] = levels[c % 3];
    if (s.maxCoeff() == 0.0) {
      CHECK_THROWS_AS(argmax_route(s), Error);
      continue;
    }
    int expected = 0;
    for (int i = 1; i < 4; ++i)
      if (s[i] > s[expected]) expected = i;
    CHECK(argmax_route(s) == expected);
    CHECK(argmax_route(s * 3.7) == expected);
    CHECK(argmax_route(s * 0.01) == expected);
  }
}

TEST_CASE("caption sets reject duplicates and empties") {
  CHECK_THROWS_AS(captions({"Walk", "Walk"}), Error);
  CHECK_THROWS_AS(captions({"Walk", ""}), Error);
  CHECK_THROWS_AS(CaptionSet(std::vector<Caption>{}), Error);
}

TEST_CASE("endpoint parsing and resolution") {
  const Endpoint e = Endpoint::parse("http://127.0.0.1:9000/v1/nli");
  CHECK(e.scheme_host_port == "http://127.0.0.1:9000");
  CHECK(e.path == "/v1/nli");
  CHECK(Endpoint::parse("http://host").path == "/");
  CHECK_THROWS_AS(Endpoint::parse("127.0.0.1:9000"), Error);

  ::unsetenv("CSI_NLI_ENDPOINT");
  CHECK(!resolve_endpoint("").has_value());
  ::setenv("CSI_NLI_ENDPOINT", "http://env:1/x", 1);
  CHECK(*resolve_endpoint("") == "http://env:1/x");
  CHECK(*resolve_endpoint("http://cfg:2/y") == "http://cfg:2/y");
  ::unsetenv("CSI_NLI_ENDPOINT");
}

TEST_CASE("entailment payload validation") {
  CHECK(parse_entailment(R"({"entailment":0.7,"neutral":0.2,"contradiction":0.1})") == 0.7);
  for (const char* bad : {R"({"entailment":0.7})", R"({"entailment":0.7,"neutral":0.7,"contradiction":0.1})",
                          R"({"entailment":-0.1,"neutral":0.6,"contradiction":0.5})", "not json", "[1,2,3]",
                          R"({"entailment":"high","neutral":0.2,"contradiction":0.1})"}) {
    try {
      parse_entailment(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == "backend_error");
      CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
  }
}

TEST_CASE("external backend selects the jump caption") {
  MockNli nli(keyword_entailment);
  const CaptionSet c = captions({"Walk", "Jump", "Zombie"});
  const ExternalScorer scorer(nli.url());
  const RouteResult r = route_command("Show me your jumping skills", c, scorer);
  CHECK(r.skill_id == 1);
  CHECK(r.scores.backend == Backend::external);
  CHECK(r.scores.scores[1] == 0.9);
  CHECK(nli.requests() == 3);
}

TEST_CASE("external client keeps at most four requests in flight") {
  MockNli nli(keyword_entailment, 60);
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back("caption" + std::to_string(i));
  const EntailmentScores s = ExternalScorer(nli.url()).score("caption3", captions(names));
  CHECK(nli.requests() == 10);
  CHECK(nli.peak() <= ExternalScorer::kMaxInFlight);
  CHECK(nli.peak() >= 2);
  CHECK(s.scores[3] == 0.9);
}

TEST_CASE("unreachable endpoint falls back to builtin with a warning") {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  const CaptionSet c = default_captions();
  const ExternalScorer scorer("http://127.0.0.1:" + std::to_string(port) + "/nli", 1.0);
  const EntailmentScores s = scorer.score("walk forward", c);
  CHECK(s.backend == Backend::builtin);
  CHECK(!s.warnings.empty());
  CHECK(s.scores == builtin_score("walk forward", c).scores);
}

TEST_CASE("slow endpoint times out into the builtin fallback") {
  MockNli nli(keyword_entailment, 700);
  const ExternalScorer scorer(nli.url(), 0.2);
  const EntailmentScores s = scorer.score("walk forward", captions({"Walk Forward", "Idle"}));
  CHECK(s.backend == Backend::builtin);
  CHECK(s.scores[0] == 1.0);
}

TEST_CASE("malformed or failing backend raises backend_error") {
  {
    MockNli nli([](const nlohmann::json&, httplib::Response& res) {
      res.set_content(R"({"entailment": 0.4})", "application/json");
    });
    try {
      ExternalScorer(nli.url()).score("jump", captions({"Jump"}));
      FAIL("expected backend_error");
    } catch (const Error& e) {
      CHECK(e.code() == "backend_error");
      CHECK(std::string(e.what()).find(R"({"entailment": 0.4})") != std::string::npos);
    }
  }
  {
    MockNli nli([](const nlohmann::json&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
    try {
      ExternalScorer(nli.url()).score("jump", captions({"Jump"}));
      FAIL("expected backend_error");
    } catch (const Error& e) {
      CHECK(e.code() == "backend_error");
    }
  }
}

TEST_CASE("swapping backends keeps the output shape and range") {
  MockNli nli(keyword_entailment);
  const CaptionSet c = default_captions();
  const EntailmentScores a = BuiltinScorer().score("walk forward", c);
  const EntailmentScores b = ExternalScorer(nli.url()).score("walk forward", c);
  CHECK(a.scores.size() == b.scores.size());
  CHECK(b.scores.minCoeff() >= 0.0);
  CHECK(b.scores.maxCoeff() <= 1.0);
}

TEST_CASE("scorer factory follows endpoint resolution") {
  ::unsetenv("CSI_NLI_ENDPOINT");
  CHECK(dynamic_cast<BuiltinScorer*>(make_scorer("").get()) != nullptr);
  CHECK(dynamic_cast<ExternalScorer*>(make_scorer("http://127.0.0.1:1/nli").get()) != nullptr);
}
