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

#include "skillmix/lang/external.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>

#include <httplib.h>
#include <json.hpp>

namespace skillmix::lang {

Endpoint Endpoint::parse(const std::string& url) {
  const size_t scheme = url.find("://");
  require(scheme != std::string::npos, "invalid_endpoint", "endpoint needs a scheme: " + url);
  const size_t slash = url.find('/', scheme + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, slash);
  if (slash != std::string::npos) e.path = url.substr(slash);
  require(e.scheme_host_port.size() > scheme + 3, "invalid_endpoint", "endpoint has no host: " + url);
  return e;
}

std::optional<std::string> resolve_endpoint(const std::string& configured) {
  if (!configured.empty()) return configured;
  const char* env = std::getenv("CSI_NLI_ENDPOINT");
  if (env && *env) return std::string(env);
  return std::nullopt;
}

double parse_entailment(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw Error("backend_error", "malformed NLI response: " + body);
  }
  double sum = 0.0, entail = 0.0;
  for (const char* key : {"entailment", "neutral", "contradiction"}) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
      throw Error("backend_error", "malformed NLI response: " + body);
    }
    const double p = j[key].get<double>();
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw Error("backend_error", "malformed NLI response: " + body);
    sum += p;
    if (std::string(key) == "entailment") entail = p;
  }
  if (std::abs(sum - 1.0) > 1e-3) throw Error("backend_error", "NLI probabilities do not sum to 1: " + body);
  return entail;
}

ExternalScorer::ExternalScorer(std::string url, double timeout_seconds, const Lexicon* fallback)
    : endpoint_(Endpoint::parse(url)),
      timeout_(timeout_seconds),
      fallback_(fallback ? BuiltinScorer(*fallback) : BuiltinScorer()) {}

namespace {

struct Reply {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string error;
};

Reply post_pair(const Endpoint& ep, double timeout, const std::string& premise, const std::string& hypothesis) {
  httplib::Client client(ep.scheme_host_port);
  const auto secs = static_cast<time_t>(timeout);
  const auto usecs = static_cast<time_t>((timeout - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  const nlohmann::json req = {{"premise", premise}, {"hypothesis", hypothesis}};
  Reply r;
  if (auto res = client.Post(ep.path, req.dump(), "application/json")) {
    r.transport_ok = true;
    r.status = res->status;
    r.body = res->body;
  } else {
    r.error = httplib::to_string(res.error());
  }
  return r;
}

}  // namespace

EntailmentScores ExternalScorer::score(const std::string& text, const CaptionSet& captions) const {
  require(!text.empty(), "invalid_argument", "command text is empty");
  const int n = captions.size();
  std::vector<Reply> replies(static_cast<size_t>(n));
  for (int start = 0; start < n; start += kMaxInFlight) {
    std::vector<std::future<Reply>> pending;
    for (int i = start; i < std::min(n, start + kMaxInFlight); ++i) {
      pending.push_back(std::async(std::launch::async, post_pair, std::cref(endpoint_), timeout_, std::cref(text),
                                   std::cref(captions[i].text)));
    }
    for (size_t k = 0; k < pending.size(); ++k) replies[static_cast<size_t>(start) + k] = pending[k].get();
  }

  for (const Reply& r : replies) {
    if (!r.transport_ok) {
      EntailmentScores fb = fallback_.score(text, captions);
      const std::string w = "NLI endpoint unavailable (" + r.error + "), using builtin scorer";
      std::cerr << "warning: " << w << '\n';
      fb.warnings.push_back(w);
      return fb;
    }
  }
  EntailmentScores out;
  out.backend = Backend::external;
  out.scores = Vec(n);
  for (int i = 0; i < n; ++i) {
    const Reply& r = replies[static_cast<size_t>(i)];
    if (r.status != 200) {
      std::cerr << "error: NLI backend status " << r.status << " payload: " << r.body << '\n';
      throw Error("backend_error", "NLI backend returned status " + std::to_string(r.status) + ": " + r.body);
    }
    try {
      out.scores[i] = parse_entailment(r.body);
    } catch (const Error&) {
      std::cerr << "error: malformed NLI payload: " << r.body << '\n';
      throw;
    }
  }
  return out;
}

EntailmentScores external_score(const std::string& text, const CaptionSet& captions, const std::string& endpoint) {
  return ExternalScorer(endpoint).score(text, captions);
}

}  // namespace skillmix::lang
