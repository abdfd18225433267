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

#ifndef PERTURBKIT_PERTURB_PERTURB_H_
#define PERTURBKIT_PERTURB_PERTURB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "perturbkit/corpus/corpus.h"
#include "perturbkit/importance/sentences.h"
#include "perturbkit/importance/shapley.h"
#include "perturbkit/perturb/homoglyph.h"
#include "perturbkit/perturb/text_provider.h"

namespace perturbkit::perturb {

using importance::Token;

enum class Technique {
  kCharacterRemove,
  kTokenRemove,
  kRandomInsert,
  kTokenUnicode,
  kPromptUnicode,
  kTokenSynonym,
  kTokensSynonym,
  kSentenceRemove,
  kSentenceRephrase,
  kRandomReplace,
};

inline constexpr Technique kAllTechniques[] = {
    Technique::kCharacterRemove, Technique::kTokenRemove,    Technique::kRandomInsert,
    Technique::kTokenUnicode,    Technique::kPromptUnicode,  Technique::kTokenSynonym,
    Technique::kTokensSynonym,   Technique::kSentenceRemove, Technique::kSentenceRephrase,
    Technique::kRandomReplace,
};

std::string_view ToString(Technique t);
std::optional<Technique> ParseTechnique(std::string_view s);

struct PerturbConfig {
  int k_top_tokens = 5;
  uint64_t seed = 0;
  int synonyms_per_token_cap = 6;
  int sentence_fraction_denominator = 3;
  std::vector<std::string> insert_charset = {"-", "_"};
  int rephrase_count = 3;

  // Throws PreconditionError when a field is out of range.
  void Validate() const;
};

nlohmann::json ToJson(const PerturbConfig& cfg);
PerturbConfig PerturbConfigFromJson(const nlohmann::json& j);

using NameMap = std::vector<std::pair<std::string, std::string>>;

struct PromptVariant {
  std::string problem_id;
  Technique technique = Technique::kCharacterRemove;
  std::string text;
  nlohmann::json params = nlohmann::json::object();
  std::optional<NameMap> name_map;  // (original, replacement); random_replace only
  std::string parent_hash;          // SHA-256 of the unperturbed prompt
  bool no_op = false;               // text equals the original prompt

  std::string digest() const;
  friend bool operator==(const PromptVariant&, const PromptVariant&) = default;
};

nlohmann::json ToJson(const PromptVariant& v);
PromptVariant VariantFromJson(const nlohmann::json& j);

struct PerturbWarning {
  std::string problem_id;
  Technique technique = Technique::kCharacterRemove;
  std::string message;
  friend bool operator==(const PerturbWarning&, const PerturbWarning&) = default;
};

// --- Token-scoped operators. `targets` must be non-empty tokens of `prompt`.

// Removes one seeded-random codepoint from each target span.
PromptVariant CharacterRemove(std::string_view prompt, std::span<const Token> targets,
                              uint64_t seed);

// Deletes every whole-word occurrence of each target's text.
PromptVariant TokenRemove(std::string_view prompt, std::span<const Token> targets);

// Inserts one seeded character from cfg.insert_charset at a seeded interior
// position of each target span; single-codepoint targets get it appended.
PromptVariant RandomInsert(std::string_view prompt, std::span<const Token> targets,
                           uint64_t seed, const PerturbConfig& cfg);

enum class UnicodeScope { kTargets, kWholePrompt };

// Swaps every mappable codepoint in scope for its homoglyph. The result is
// technique token_unicode or prompt_unicode according to `scope`.
PromptVariant UnicodeSubstitute(std::string_view prompt, UnicodeScope scope,
                                std::span<const Token> targets,
                                const HomoglyphTable& table);

enum class SynonymMode { kAllOccurrences, kRankedOccurrence };

// One variant per (target, synonym), at most cfg.synonyms_per_token_cap
// synonyms per target. kAllOccurrences (token_synonym) replaces every
// whole-word occurrence; kRankedOccurrence (tokens_synonym) only the target's
// own span. Provider failures skip the token and append a warning.
std::vector<PromptVariant> SynonymSubstitute(std::string_view prompt,
                                             std::span<const Token> targets,
                                             TextProvider& provider, SynonymMode mode,
                                             const PerturbConfig& cfg,
                                             std::vector<PerturbWarning>* warnings);

// --- Sentence-scoped operators.

// Sliding window of w = max(1, floor(n / denominator)) consecutive sentences;
// one variant per start index, n - w + 1 in total.
std::vector<PromptVariant> SentenceRemove(std::string_view prompt, const PerturbConfig& cfg);

// Rewrites each of the top min(count, n) ranked sentences in turn, leaving
// the rest of the prompt byte-identical.
std::vector<PromptVariant> SentenceRephrase(std::string_view prompt,
                                            const importance::SentenceRanking& ranking,
                                            TextProvider& provider, int count,
                                            std::vector<PerturbWarning>* warnings);

// --- Identifier-scoped operator.

// Replaces each identifier's whole-word occurrences with a seeded lowercase
// string of the same length. File extensions and directories are kept, and
// identifiers sharing a stem share a replacement. Replacements never occur
// anywhere in the original prompt. Throws PreconditionError when the list is
// empty or an identifier does not occur.
PromptVariant RandomReplace(std::string_view prompt,
                            std::span<const corpus::Identifier> identifiers, uint64_t seed);

struct VariantSet {
  std::vector<PromptVariant> variants;
  std::vector<PerturbWarning> warnings;
};

// Runs every technique in `techniques` (all when empty) on one problem with
// the top cfg.k_top_tokens tokens as targets. Variants appear in technique
// order. Each technique draws from its own stream derived from cfg.seed and
// the problem id.
VariantSet GenerateAll(const corpus::Problem& problem,
                       const importance::TokenAttribution& attr,
                       const importance::SentenceRanking& ranking, TextProvider& provider,
                       const HomoglyphTable& table, const PerturbConfig& cfg,
                       std::span<const Technique> techniques = {});

// One JSON object per line.
std::string VariantsToJsonl(std::span<const PromptVariant> variants);
std::vector<PromptVariant> VariantsFromJsonl(std::string_view jsonl);

}  // namespace perturbkit::perturb

#endif  // PERTURBKIT_PERTURB_PERTURB_H_
