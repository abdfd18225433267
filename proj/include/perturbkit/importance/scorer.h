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

#ifndef PERTURBKIT_IMPORTANCE_SCORER_H_
#define PERTURBKIT_IMPORTANCE_SCORER_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/error.h"

namespace perturbkit::importance {

class ScorerError : public Error {
 public:
  using Error::Error;
};

// A black-box scalar function of prompt text. Implementations must be safe to
// call concurrently and must return the same value for the same text.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double Score(std::string_view text) const = 0;
  virtual std::string id() const = 0;
};

enum class ScorerKind { kSyntheticWeights, kExternalCommand, kHttpEndpoint };

std::string_view ToString(ScorerKind kind);
std::optional<ScorerKind> ParseScorerKind(std::string_view s);

struct ScorerConfig {
  ScorerKind kind = ScorerKind::kSyntheticWeights;
  nlohmann::json config = nlohmann::json::object();
};

// Deterministic test scorer. Worth of a text is
//   bias + sum over word occurrences of weight(word)
//        + sum over configured pairs whose words both occur of pair weight,
// optionally saturated at `cap`.
class SyntheticScorer : public Scorer {
 public:
  struct PairTerm {
    std::string first;
    std::string second;
    double weight = 0;
  };

  SyntheticScorer(std::map<std::string, double> weights, std::vector<PairTerm> pairs,
                  double bias = 0, std::optional<double> cap = std::nullopt);
  static std::unique_ptr<SyntheticScorer> FromJson(const nlohmann::json& config);

  double Score(std::string_view text) const override;
  std::string id() const override { return id_; }

 private:
  std::map<std::string, double> weights_;
  std::vector<PairTerm> pairs_;
  double bias_;
  std::optional<double> cap_;
  std::string id_;
};

// Runs a shell command per query: prompt bytes on stdin, one decimal real on
// stdout, nonzero exit means failure.
class CommandScorer : public Scorer {
 public:
  explicit CommandScorer(std::string command, double timeout_seconds = 60);
  double Score(std::string_view text) const override;
  std::string id() const override;

 private:
  std::string command_;
  double timeout_seconds_;
};

// POSTs the raw prompt; the response body is one decimal real.
class HttpScorer : public Scorer {
 public:
  explicit HttpScorer(std::string url, double timeout_seconds = 60);
  double Score(std::string_view text) const override;
  std::string id() const override;

 private:
  std::string url_;
  double timeout_seconds_;
};

// Memoizes another scorer keyed by the SHA-256 of the text.
class CachingScorer : public Scorer {
 public:
  explicit CachingScorer(std::unique_ptr<Scorer> inner) : inner_(std::move(inner)) {}
  double Score(std::string_view text) const override;
  std::string id() const override { return inner_->id(); }
  size_t cache_size() const;

 private:
  std::unique_ptr<Scorer> inner_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, double> cache_;
};

// Parses a decimal real with optional surrounding whitespace.
std::optional<double> ParseScalar(std::string_view text);

// Builds the configured backend wrapped in a CachingScorer.
std::unique_ptr<Scorer> MakeScorer(const ScorerConfig& config);

}  // namespace perturbkit::importance

#endif  // PERTURBKIT_IMPORTANCE_SCORER_H_
