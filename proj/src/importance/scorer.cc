// Copyright 2026 The Perturbkit Authors
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

#include "perturbkit/importance/scorer.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <set>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/http_util.h"
#include "perturbkit/common/subprocess.h"
#include "perturbkit/importance/tokenizer.h"

namespace perturbkit::importance {

using nlohmann::json;

std::string_view ToString(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kSyntheticWeights:
      return "synthetic_weights";
    case ScorerKind::kExternalCommand:
      return "external_command";
    case ScorerKind::kHttpEndpoint:
      return "http_endpoint";
  }
  return "synthetic_weights";
}

std::optional<ScorerKind> ParseScorerKind(std::string_view s) {
  if (s == "synthetic_weights") return ScorerKind::kSyntheticWeights;
  if (s == "external_command") return ScorerKind::kExternalCommand;
  if (s == "http_endpoint") return ScorerKind::kHttpEndpoint;
  return std::nullopt;
}

std::optional<double> ParseScalar(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return std::nullopt;
  const auto last = text.find_last_not_of(" \t\r\n");
  const std::string trimmed(text.substr(first, last - first + 1));
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(trimmed.c_str(), &end);
  if (errno != 0 || end != trimmed.c_str() + trimmed.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

SyntheticScorer::SyntheticScorer(std::map<std::string, double> weights,
                                 std::vector<PairTerm> pairs, double bias,
                                 std::optional<double> cap)
    : weights_(std::move(weights)), pairs_(std::move(pairs)), bias_(bias), cap_(cap) {
  json canon = {{"weights", weights_}, {"bias", bias_}};
  for (const auto& p : pairs_) canon["pairs"].push_back({p.first, p.second, p.weight});
  if (cap_) canon["cap"] = *cap_;
  id_ = "synthetic_weights:" + Sha256Hex(canon.dump()).substr(0, 16);
}

std::unique_ptr<SyntheticScorer> SyntheticScorer::FromJson(const json& config) {
  std::map<std::string, double> weights;
  std::vector<PairTerm> pairs;
  try {
    if (config.contains("weights")) {
      weights = config.at("weights").get<std::map<std::string, double>>();
    }
    if (config.contains("pairs")) {
      for (const auto& p : config.at("pairs")) {
        pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>(),
                         p.at(2).get<double>()});
      }
    }
    const double bias = config.value("bias", 0.0);
    std::optional<double> cap;
    if (config.contains("cap")) cap = config.at("cap").get<double>();
    return std::make_unique<SyntheticScorer>(std::move(weights), std::move(pairs), bias,
                                             cap);
  } catch (const json::exception& e) {
    throw ScorerError(std::string("invalid synthetic scorer config: ") + e.what());
  }
}

double SyntheticScorer::Score(std::string_view text) const {
  double total = bias_;
  std::set<std::string> present;
  for (const Token& token : Tokenize(text)) {
    if (auto it = weights_.find(token.text); it != weights_.end()) total += it->second;
    present.insert(token.text);
  }
  for (const auto& p : pairs_) {
    if (present.count(p.first) && present.count(p.second)) total += p.weight;
  }
  if (cap_) total = std::min(total, *cap_);
  return total;
}

CommandScorer::CommandScorer(std::string command, double timeout_seconds)
    : command_(std::move(command)), timeout_seconds_(timeout_seconds) {}

std::string CommandScorer::id() const {
  return "external_command:" + Sha256Hex(command_).substr(0, 16);
}

double CommandScorer::Score(std::string_view text) const {
  ProcessOptions opts = ShellCommand(command_);
  opts.stdin_data = std::string(text);
  opts.timeout_seconds = timeout_seconds_;
  const ProcessResult r = RunProcess(opts);
  if (r.timed_out) throw ScorerError("scorer command timed out: " + command_);
  if (!r.Succeeded()) {
    throw ScorerError("scorer command failed (exit " + std::to_string(r.exit_code) +
                      ", signal " + std::to_string(r.term_signal) + "): " + command_ +
                      "\nstderr: " + r.stderr_data.substr(0, 2000));
  }
  const auto value = ParseScalar(r.stdout_data);
  if (!value) {
    throw ScorerError("scorer command printed no decimal real: '" +
                      r.stdout_data.substr(0, 200) + "'");
  }
  return *value;
}

HttpScorer::HttpScorer(std::string url, double timeout_seconds)
    : url_(std::move(url)), timeout_seconds_(timeout_seconds) {}

std::string HttpScorer::id() const { return "http_endpoint:" + Sha256Hex(url_).substr(0, 16); }

double HttpScorer::Score(std::string_view text) const {
  HttpResponse res;
  try {
    res = HttpPost(url_, std::string(text), "text/plain; charset=utf-8", {},
                   timeout_seconds_);
  } catch (const IoError& e) {
    throw ScorerError(e.what());
  }
  if (res.status != 200) {
    throw ScorerError("scorer endpoint " + url_ + " returned HTTP " +
                      std::to_string(res.status) + ": " + res.body.substr(0, 200));
  }
  const auto value = ParseScalar(res.body);
  if (!value) {
    throw ScorerError("scorer endpoint returned no decimal real: '" +
                      res.body.substr(0, 200) + "'");
  }
  return *value;
}

double CachingScorer::Score(std::string_view text) const {
  const std::string key = Sha256Hex(text);
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double value = inner_->Score(text);
  std::unique_lock lock(mu_);
  cache_.emplace(key, value);
  return value;
}

size_t CachingScorer::cache_size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

std::unique_ptr<Scorer> MakeScorer(const ScorerConfig& config) {
  std::unique_ptr<Scorer> inner;
  const json& c = config.config;
  switch (config.kind) {
    case ScorerKind::kSyntheticWeights:
      inner = SyntheticScorer::FromJson(c);
      break;
    case ScorerKind::kExternalCommand:
      if (!c.contains("command") || !c["command"].is_string()) {
        throw ScorerError("external_command scorer needs a 'command' string");
      }
      inner = std::make_unique<CommandScorer>(c["command"].get<std::string>(),
                                              c.value("timeout_seconds", 60.0));
      break;
    case ScorerKind::kHttpEndpoint:
      if (!c.contains("url") || !c["url"].is_string()) {
        throw ScorerError("http_endpoint scorer needs a 'url' string");
      }
      inner = std::make_unique<HttpScorer>(c["url"].get<std::string>(),
                                           c.value("timeout_seconds", 60.0));
      break;
  }
  return std::make_unique<CachingScorer>(std::move(inner));
}

}  // namespace perturbkit::importance
