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

#ifndef PERTURBKIT_PERTURB_TEXT_PROVIDER_H_
#define PERTURBKIT_PERTURB_TEXT_PROVIDER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/error.h"
#include "perturbkit/genclient/backend.h"

namespace perturbkit::perturb {

class ProviderError : public Error {
 public:
  using Error::Error;
};

// Supplies replacement wording for synonym and rephrase perturbations.
class TextProvider {
 public:
  virtual ~TextProvider() = default;
  // Synonyms for `token` as used in `sentence_context`. Throws ProviderError.
  virtual std::vector<std::string> Synonyms(std::string_view token,
                                            std::string_view sentence_context) = 0;
  // A meaning-preserving rewrite of `sentence`. Throws ProviderError.
  virtual std::string Rephrase(std::string_view sentence) = 0;
  virtual std::string id() const = 0;
};

// Deterministic lookup tables, mainly for tests and offline runs.
//
//   {"synonyms": {"compute": ["calculate", "determine"]},
//    "rephrasings": {"<sentence>": "<rewrite>"},
//    "rephrase_prefix": "In other words, "}
//
// Unknown tokens have no synonyms. Unknown sentences get rephrase_prefix
// prepended when it is set and fail otherwise.
class FixtureDictionaryProvider : public TextProvider {
 public:
  FixtureDictionaryProvider(std::map<std::string, std::vector<std::string>> synonyms,
                            std::map<std::string, std::string> rephrasings,
                            std::optional<std::string> rephrase_prefix = std::nullopt);
  static std::unique_ptr<FixtureDictionaryProvider> FromJson(const nlohmann::json& j);

  std::vector<std::string> Synonyms(std::string_view token,
                                    std::string_view sentence_context) override;
  std::string Rephrase(std::string_view sentence) override;
  std::string id() const override { return "fixture_dictionary"; }

 private:
  std::map<std::string, std::vector<std::string>> synonyms_;
  std::map<std::string, std::string> rephrasings_;
  std::optional<std::string> rephrase_prefix_;
};

// Asks a generation backend for synonyms and rephrasings.
class LlmTextProvider : public TextProvider {
 public:
  explicit LlmTextProvider(std::unique_ptr<genclient::GenBackend> backend, int max_synonyms = 6)
      : backend_(std::move(backend)), max_synonyms_(max_synonyms) {}

  static std::string SynonymPrompt(std::string_view token, std::string_view context,
                                   int max_synonyms);
  static std::string RephrasePrompt(std::string_view sentence);
  // Splits a comma- or newline-separated answer into clean, distinct words,
  // dropping the token itself.
  static std::vector<std::string> ParseSynonymAnswer(std::string_view answer,
                                                     std::string_view token);

  std::vector<std::string> Synonyms(std::string_view token,
                                    std::string_view sentence_context) override;
  std::string Rephrase(std::string_view sentence) override;
  std::string id() const override { return "llm_backend:" + backend_->config().name; }

 private:
  std::unique_ptr<genclient::GenBackend> backend_;
  int max_synonyms_;
};

enum class ProviderKind { kLlmBackend, kFixtureDictionary };

// {"kind": "fixture_dictionary", "path": "providers.json"} or
// {"kind": "fixture_dictionary", "dictionary": {...}} or
// {"kind": "llm_backend", "backend": {<backend config>}}.
std::unique_ptr<TextProvider> MakeTextProvider(const nlohmann::json& config,
                                               const std::filesystem::path& base_dir);

}  // namespace perturbkit::perturb

#endif  // PERTURBKIT_PERTURB_TEXT_PROVIDER_H_
