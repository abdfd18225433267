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

#include "perturbkit/importance/shapley.h"

#include <algorithm>
#include <numeric>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/parallel.h"
#include "perturbkit/common/rng.h"

namespace perturbkit::importance {
namespace {

using nlohmann::json;

// Exhaustive enumeration cost doubles per token; refuse anything silly.
constexpr size_t kMaxExhaustiveTokens = 24;

std::string MaskText(std::string_view prompt, const std::vector<Token>& tokens,
                     uint64_t mask) {
  std::vector<Span> removed;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!(mask >> i & 1)) removed.push_back(tokens[i].span);
  }
  return DeleteSpans(prompt, removed);
}

void ExactValues(std::string_view prompt, const Scorer& scorer, size_t workers,
                 TokenAttribution& attr) {
  const size_t n = attr.tokens.size();
  const uint64_t full = (uint64_t{1} << n) - 1;
  std::vector<double> worth(full + 1);
  ParallelFor(worth.size(), workers, [&](size_t mask) {
    worth[mask] = scorer.Score(MaskText(prompt, attr.tokens, mask));
  });

  // weight(s) = s! (n - s - 1)! / n! = 1 / (n * C(n - 1, s))
  std::vector<double> weight(n);
  double binom = 1;  // C(n - 1, s)
  for (size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }

  attr.values.assign(n, 0.0);
  std::vector<double> by_size(n);
  for (size_t i = 0; i < n; ++i) {
    const uint64_t bit = uint64_t{1} << i;
    std::fill(by_size.begin(), by_size.end(), 0.0);
    for (uint64_t mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      by_size[std::popcount(mask)] += worth[mask | bit] - worth[mask];
    }
    double phi = 0;
    for (size_t s = 0; s < n; ++s) phi += weight[s] * by_size[s];
    attr.values[i] = phi;
  }
  attr.full_score = worth[full];
  attr.empty_score = worth[0];
}

void MonteCarloValues(std::string_view prompt, const Scorer& scorer,
                      const AttributionConfig& cfg, TokenAttribution& attr) {
  const size_t n = attr.tokens.size();
  const auto samples = static_cast<size_t>(cfg.samples);

  // Permutations are drawn up front so results do not depend on scheduling.
  SeededRng rng(cfg.seed);
  std::vector<std::vector<size_t>> perms(samples);
  for (auto& perm : perms) {
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
  }

  std::vector<std::vector<double>> marginals(samples, std::vector<double>(n));
  std::vector<bool> included_empty(n, false);
  const double empty = scorer.Score(CoalitionText(prompt, attr.tokens, included_empty));
  ParallelFor(samples, cfg.workers, [&](size_t p) {
    std::vector<bool> included(n, false);
    double prev = empty;
    for (size_t token : perms[p]) {
      included[token] = true;
      const double next = scorer.Score(CoalitionText(prompt, attr.tokens, included));
      marginals[p][token] = next - prev;
      prev = next;
    }
  });

  attr.values.assign(n, 0.0);
  for (const auto& m : marginals) {
    for (size_t i = 0; i < n; ++i) attr.values[i] += m[i];
  }
  for (double& v : attr.values) v /= static_cast<double>(samples);
  attr.full_score = scorer.Score(prompt);
  attr.empty_score = empty;
}

}  // namespace

std::string_view ToString(Estimator e) {
  return e == Estimator::kExact ? "exact" : "permutation_mc";
}

std::optional<Estimator> ParseEstimator(std::string_view s) {
  if (s == "exact") return Estimator::kExact;
  if (s == "permutation_mc") return Estimator::kPermutationMonteCarlo;
  return std::nullopt;
}

json ToJson(const TokenAttribution& attr) {
  json tokens = json::array();
  for (size_t i = 0; i < attr.tokens.size(); ++i) {
    const Token& t = attr.tokens[i];
    tokens.push_back({{"index", t.index},
                      {"text", t.text},
                      {"start", t.span.start},
                      {"end", t.span.end},
                      {"value", attr.values[i]}});
  }
  return {{"prompt_hash", attr.prompt_hash},
          {"scorer_id", attr.scorer_id},
          {"estimator", ToString(attr.estimator)},
          {"samples", attr.samples},
          {"seed", attr.seed},
          {"full_score", attr.full_score},
          {"empty_score", attr.empty_score},
          {"tokens", tokens}};
}

TokenAttribution AttributionFromJson(const json& j) {
  TokenAttribution attr;
  attr.prompt_hash = j.at("prompt_hash").get<std::string>();
  attr.scorer_id = j.at("scorer_id").get<std::string>();
  const auto est = ParseEstimator(j.at("estimator").get<std::string>());
  if (!est) throw Error("unknown estimator " + j.at("estimator").dump());
  attr.estimator = *est;
  attr.samples = j.at("samples").get<int>();
  attr.seed = j.at("seed").get<uint64_t>();
  attr.full_score = j.at("full_score").get<double>();
  attr.empty_score = j.at("empty_score").get<double>();
  for (const auto& t : j.at("tokens")) {
    attr.tokens.push_back({t.at("text").get<std::string>(),
                           {t.at("start").get<size_t>(), t.at("end").get<size_t>()},
                           t.at("index").get<size_t>()});
    attr.values.push_back(t.at("value").get<double>());
  }
  return attr;
}

std::string CoalitionText(std::string_view prompt, const std::vector<Token>& tokens,
                          const std::vector<bool>& included) {
  if (included.size() != tokens.size()) {
    throw PreconditionError("coalition mask size does not match token count");
  }
  std::vector<Span> removed;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!included[i]) removed.push_back(tokens[i].span);
  }
  return DeleteSpans(prompt, removed);
}

TokenAttribution ShapleyAttributions(std::string_view prompt, const Scorer& scorer,
                                     const AttributionConfig& cfg) {
  TokenAttribution attr;
  attr.tokens = Tokenize(prompt);
  if (attr.tokens.empty()) {
    throw PreconditionError("cannot attribute a prompt without tokens");
  }
  attr.prompt_hash = Sha256Hex(prompt);
  attr.scorer_id = scorer.id();
  attr.seed = cfg.seed;
  const size_t limit = std::min(cfg.exhaustive_limit, kMaxExhaustiveTokens);
  if (attr.tokens.size() <= limit) {
    attr.estimator = Estimator::kExact;
    attr.samples = 0;
    ExactValues(prompt, scorer, cfg.workers, attr);
  } else {
    if (cfg.samples < 1) throw PreconditionError("samples must be >= 1");
    attr.estimator = Estimator::kPermutationMonteCarlo;
    attr.samples = cfg.samples;
    MonteCarloValues(prompt, scorer, cfg, attr);
  }
  return attr;
}

std::vector<Token> TopKTokens(const TokenAttribution& attr, int k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  std::vector<size_t> order(attr.tokens.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (attr.values[a] != attr.values[b]) return attr.values[a] > attr.values[b];
    return attr.tokens[a].span.start < attr.tokens[b].span.start;
  });
  order.resize(std::min(order.size(), static_cast<size_t>(k)));
  std::vector<Token> out;
  for (size_t i : order) out.push_back(attr.tokens[i]);
  return out;
}

}  // namespace perturbkit::importance
