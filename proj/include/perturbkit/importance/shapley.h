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

#ifndef PERTURBKIT_IMPORTANCE_SHAPLEY_H_
#define PERTURBKIT_IMPORTANCE_SHAPLEY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbkit/importance/scorer.h"
#include "perturbkit/importance/tokenizer.h"

namespace perturbkit::importance {

enum class Estimator { kExact, kPermutationMonteCarlo };

std::string_view ToString(Estimator e);
std::optional<Estimator> ParseEstimator(std::string_view s);

struct AttributionConfig {
  int samples = 200;             // permutations for the Monte-Carlo estimator
  uint64_t seed = 0;
  size_t exhaustive_limit = 12;  // exact enumeration up to this many tokens
  size_t workers = 1;            // concurrent coalition evaluations
};

// Per-token Shapley values of a prompt under one scorer. `values[i]` belongs
// to `tokens[i]`.
struct TokenAttribution {
  std::string prompt_hash;
  std::string scorer_id;
  std::vector<Token> tokens;
  std::vector<double> values;
  Estimator estimator = Estimator::kExact;
  int samples = 0;  // permutations drawn; 0 for exact enumeration
  uint64_t seed = 0;
  double full_score = 0;   // worth of the grand coalition
  double empty_score = 0;  // worth with every token deleted

  friend bool operator==(const TokenAttribution&, const TokenAttribution&) = default;
};

nlohmann::json ToJson(const TokenAttribution& attr);
TokenAttribution AttributionFromJson(const nlohmann::json& j);

// The prompt with every token not in the coalition deleted (whitespace
// collapsed via DeleteSpans). `included.size()` must equal `tokens.size()`.
std::string CoalitionText(std::string_view prompt, const std::vector<Token>& tokens,
                          const std::vector<bool>& included);

// Shapley value of each word token where a coalition is worth
// scorer(CoalitionText). Exact enumeration when the token count is at most
// cfg.exhaustive_limit, otherwise cfg.samples random permutations drawn from
// cfg.seed. Both estimators satisfy efficiency: the values sum to
// full_score - empty_score. Throws PreconditionError for a prompt without
// tokens; scorer failures propagate as ScorerError.
TokenAttribution ShapleyAttributions(std::string_view prompt, const Scorer& scorer,
                                     const AttributionConfig& cfg);

// The k highest-valued tokens, ties broken by earlier span start, in rank
// order. Returns all tokens when fewer than k exist.
std::vector<Token> TopKTokens(const TokenAttribution& attr, int k);

}  // namespace perturbkit::importance

#endif  // PERTURBKIT_IMPORTANCE_SHAPLEY_H_
