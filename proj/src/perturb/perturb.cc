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

#include "perturbkit/perturb/perturb.h"

#include <algorithm>
#include <set>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/rng.h"
#include "perturbkit/common/text.h"
#include "perturbkit/common/utf8.h"

namespace perturbkit::perturb {
namespace {

using nlohmann::json;
using Edit = std::pair<Span, std::string>;

constexpr int kMaxReplaceAttempts = 64;
constexpr int kMaxDrawsPerStem = 4096;

void CheckTargets(std::string_view prompt, std::span<const Token> targets) {
  if (targets.empty()) throw PreconditionError("targets must be non-empty");
  std::set<size_t> starts;
  for (const Token& t : targets) {
    if (t.span.end > prompt.size() || t.span.start >= t.span.end ||
        prompt.substr(t.span.start, t.span.size()) != t.text) {
      throw PreconditionError("target '" + t.text + "' does not match the prompt span");
    }
    if (!starts.insert(t.span.start).second) {
      throw PreconditionError("duplicate target span for '" + t.text + "'");
    }
  }
}

PromptVariant MakeVariant(std::string_view prompt, Technique technique, std::string text,
                          json params) {
  PromptVariant v;
  v.technique = technique;
  v.no_op = text == prompt;
  v.text = std::move(text);
  v.params = std::move(params);
  v.parent_hash = Sha256Hex(prompt);
  return v;
}

std::string ApplyEdits(std::string_view prompt, std::vector<Edit> edits) {
  std::stable_sort(edits.begin(), edits.end(),
                   [](const Edit& a, const Edit& b) { return a.first.start < b.first.start; });
  return ReplaceSpans(prompt, edits);
}

std::string_view SentenceContaining(std::string_view prompt, const Span& span) {
  for (const Span& s : importance::SplitSentences(prompt)) {
    if (s.Contains(span)) return prompt.substr(s.start, s.size());
  }
  return prompt;
}

// Whole-word, longest-first substitution used for the forward direction of
// random_replace.
std::string WholeWordSubstitute(std::string_view text, const NameMap& pairs) {
  std::vector<const std::pair<std::string, std::string>*> order;
  for (const auto& p : pairs) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->first.size() > b->first.size(); });
  std::string out;
  size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    if (pos == 0 || !IsWordCharAt(text, pos - 1)) {
      for (const auto* p : order) {
        const size_t end = pos + p->first.size();
        if (text.compare(pos, p->first.size(), p->first) == 0 &&
            (end >= text.size() || !IsWordCharAt(text, end))) {
          out += p->second;
          pos = end;
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(text[pos++]);
  }
  return out;
}

struct NameParts {
  std::string dir;
  std::string stem;
  std::string ext;
};

NameParts SplitName(const corpus::Identifier& ident) {
  NameParts parts{"", ident.name, ""};
  if (ident.role != corpus::IdentifierRole::kFile) return parts;
  const size_t slash = ident.name.rfind('/');
  if (slash != std::string::npos) {
    parts.dir = ident.name.substr(0, slash + 1);
    parts.stem = ident.name.substr(slash + 1);
  }
  const size_t dot = parts.stem.rfind('.');
  if (dot != std::string::npos && dot > 0) {
    parts.ext = parts.stem.substr(dot);
    parts.stem.resize(dot);
  }
  return parts;
}

}  // namespace

std::string_view ToString(Technique t) {
  switch (t) {
    case Technique::kCharacterRemove:
      return "character_remove";
    case Technique::kTokenRemove:
      return "token_remove";
    case Technique::kRandomInsert:
      return "random_insert";
    case Technique::kTokenUnicode:
      return "token_unicode";
    case Technique::kPromptUnicode:
      return "prompt_unicode";
    case Technique::kTokenSynonym:
      return "token_synonym";
    case Technique::kTokensSynonym:
      return "tokens_synonym";
    case Technique::kSentenceRemove:
      return "sentence_remove";
    case Technique::kSentenceRephrase:
      return "sentence_rephrase";
    case Technique::kRandomReplace:
      return "random_replace";
  }
  return "character_remove";
}

std::optional<Technique> ParseTechnique(std::string_view s) {
  for (Technique t : kAllTechniques) {
    if (ToString(t) == s) return t;
  }
  return std::nullopt;
}

void PerturbConfig::Validate() const {
  if (k_top_tokens < 1) throw PreconditionError("k_top_tokens must be >= 1");
  if (synonyms_per_token_cap < 1) {
    throw PreconditionError("synonyms_per_token_cap must be >= 1");
  }
  if (sentence_fraction_denominator < 1) {
    throw PreconditionError("sentence_fraction_denominator must be >= 1");
  }
  if (rephrase_count < 1) throw PreconditionError("rephrase_count must be >= 1");
  if (insert_charset.empty()) throw PreconditionError("insert_charset must be non-empty");
  for (const auto& c : insert_charset) {
    if (c.empty() || CodepointCount(c) != 1) {
      throw PreconditionError("insert_charset entries must be single characters");
    }
  }
}

json ToJson(const PerturbConfig& cfg) {
  return {{"k_top_tokens", cfg.k_top_tokens},
          {"seed", cfg.seed},
          {"synonyms_per_token_cap", cfg.synonyms_per_token_cap},
          {"sentence_fraction_denominator", cfg.sentence_fraction_denominator},
          {"insert_charset", cfg.insert_charset},
          {"rephrase_count", cfg.rephrase_count}};
}

PerturbConfig PerturbConfigFromJson(const json& j) {
  PerturbConfig cfg;
  cfg.k_top_tokens = j.value("k_top_tokens", cfg.k_top_tokens);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.synonyms_per_token_cap = j.value("synonyms_per_token_cap", cfg.synonyms_per_token_cap);
  cfg.sentence_fraction_denominator =
      j.value("sentence_fraction_denominator", cfg.sentence_fraction_denominator);
  if (j.contains("insert_charset")) {
    cfg.insert_charset = j.at("insert_charset").get<std::vector<std::string>>();
  }
  cfg.rephrase_count = j.value("rephrase_count", cfg.rephrase_count);
  cfg.Validate();
  return cfg;
}

std::string PromptVariant::digest() const { return Sha256Hex(text); }

json ToJson(const PromptVariant& v) {
  json name_map = nullptr;
  if (v.name_map) {
    name_map = json::array();
    for (const auto& [orig, repl] : *v.name_map) name_map.push_back({orig, repl});
  }
  return {{"problem_id", v.problem_id}, {"technique", ToString(v.technique)},
          {"params", v.params},         {"name_map", name_map},
          {"text", v.text},             {"text_digest", v.digest()},
          {"parent_hash", v.parent_hash}, {"no_op", v.no_op}};
}

PromptVariant VariantFromJson(const json& j) {
  PromptVariant v;
  v.problem_id = j.at("problem_id").get<std::string>();
  const auto t = ParseTechnique(j.at("technique").get<std::string>());
  if (!t) throw Error("unknown technique " + j.at("technique").dump());
  v.technique = *t;
  v.params = j.at("params");
  if (!j.at("name_map").is_null()) {
    NameMap map;
    for (const auto& pair : j.at("name_map")) {
      map.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    v.name_map = std::move(map);
  }
  v.text = j.at("text").get<std::string>();
  v.parent_hash = j.at("parent_hash").get<std::string>();
  v.no_op = j.at("no_op").get<bool>();
  if (j.contains("text_digest") && j.at("text_digest").get<std::string>() != v.digest()) {
    throw Error("variant text does not match its recorded digest");
  }
  return v;
}

PromptVariant CharacterRemove(std::string_view prompt, std::span<const Token> targets,
                              uint64_t seed) {
  CheckTargets(prompt, targets);
  SeededRng rng(seed);
  std::vector<Edit> edits;
  json removed = json::array();
  for (const Token& t : targets) {
    const auto bounds = CodepointBoundaries(t.text);
    const size_t idx = rng.Uniform(bounds.size() - 1);
    const Span span{t.span.start + bounds[idx], t.span.start + bounds[idx + 1]};
    edits.push_back({span, ""});
    removed.push_back({{"token", t.text},
                       {"offset", idx},
                       {"char", t.text.substr(bounds[idx], bounds[idx + 1] - bounds[idx])}});
  }
  return MakeVariant(prompt, Technique::kCharacterRemove, ApplyEdits(prompt, edits),
                     {{"seed", seed}, {"removed", removed}});
}

PromptVariant TokenRemove(std::string_view prompt, std::span<const Token> targets) {
  CheckTargets(prompt, targets);
  std::set<std::string> words;
  json names = json::array();
  for (const Token& t : targets) {
    if (words.insert(t.text).second) names.push_back(t.text);
  }
  std::vector<Span> spans;
  for (const Token& tok : importance::Tokenize(prompt)) {
    if (words.count(tok.text)) spans.push_back(tok.span);
  }
  return MakeVariant(prompt, Technique::kTokenRemove, DeleteSpans(prompt, spans),
                     {{"tokens", names}, {"occurrences_removed", spans.size()}});
}

PromptVariant RandomInsert(std::string_view prompt, std::span<const Token> targets,
                           uint64_t seed, const PerturbConfig& cfg) {
  CheckTargets(prompt, targets);
  cfg.Validate();
  SeededRng rng(seed);
  std::vector<Edit> edits;
  json inserted = json::array();
  for (const Token& t : targets) {
    const auto bounds = CodepointBoundaries(t.text);
    const size_t count = bounds.size() - 1;
    const size_t at = count == 1 ? 1 : 1 + rng.Uniform(count - 1);
    const std::string& ch = cfg.insert_charset[rng.Uniform(cfg.insert_charset.size())];
    const size_t pos = t.span.start + bounds[at];
    edits.push_back({{pos, pos}, ch});
    inserted.push_back({{"token", t.text}, {"offset", at}, {"char", ch}});
  }
  return MakeVariant(prompt, Technique::kRandomInsert, ApplyEdits(prompt, edits),
                     {{"seed", seed}, {"inserted", inserted}});
}

PromptVariant UnicodeSubstitute(std::string_view prompt, UnicodeScope scope,
                                std::span<const Token> targets,
                                const HomoglyphTable& table) {
  std::vector<Span> ranges;
  if (scope == UnicodeScope::kTargets) {
    CheckTargets(prompt, targets);
    for (const Token& t : targets) ranges.push_back(t.span);
    std::sort(ranges.begin(), ranges.end(),
              [](const Span& a, const Span& b) { return a.start < b.start; });
  } else {
    ranges.push_back({0, prompt.size()});
  }
  std::string out;
  out.reserve(prompt.size() * 2);
  size_t replaced = 0;
  size_t r = 0;
  for (size_t pos = 0; pos < prompt.size();) {
    const size_t len = Utf8SequenceLength(prompt, pos);
    while (r < ranges.size() && ranges[r].end <= pos) ++r;
    const bool in_scope = r < ranges.size() && ranges[r].start <= pos;
    const auto mapped =
        in_scope ? table.Lookup(DecodeCodepointAt(prompt, pos)) : std::nullopt;
    if (mapped) {
      out += EncodeUtf8(*mapped);
      ++replaced;
    } else {
      out.append(prompt.substr(pos, len));
    }
    pos += len;
  }
  const Technique technique = scope == UnicodeScope::kTargets ? Technique::kTokenUnicode
                                                              : Technique::kPromptUnicode;
  json params = {{"scope", scope == UnicodeScope::kTargets ? "targets" : "whole_prompt"},
                 {"replaced", replaced}};
  if (scope == UnicodeScope::kTargets) {
    json names = json::array();
    for (const Token& t : targets) names.push_back(t.text);
    params["tokens"] = names;
  }
  return MakeVariant(prompt, technique, std::move(out), std::move(params));
}

std::vector<PromptVariant> SynonymSubstitute(std::string_view prompt,
                                             std::span<const Token> targets,
                                             TextProvider& provider, SynonymMode mode,
                                             const PerturbConfig& cfg,
                                             std::vector<PerturbWarning>* warnings) {
  CheckTargets(prompt, targets);
  cfg.Validate();
  const Technique technique = mode == SynonymMode::kAllOccurrences
                                  ? Technique::kTokenSynonym
                                  : Technique::kTokensSynonym;
  const auto tokens = importance::Tokenize(prompt);
  std::vector<PromptVariant> out;
  for (const Token& target : targets) {
    std::vector<std::string> synonyms;
    try {
      synonyms = provider.Synonyms(target.text, SentenceContaining(prompt, target.span));
    } catch (const ProviderError& e) {
      if (warnings) {
        warnings->push_back({"", technique,
                             "skipped token '" + target.text + "': " + e.what()});
      }
      continue;
    }
    if (synonyms.size() > static_cast<size_t>(cfg.synonyms_per_token_cap)) {
      synonyms.resize(static_cast<size_t>(cfg.synonyms_per_token_cap));
    }
    std::vector<Span> spans;
    if (mode == SynonymMode::kAllOccurrences) {
      for (const Token& tok : tokens) {
        if (tok.text == target.text) spans.push_back(tok.span);
      }
    } else {
      spans.push_back(target.span);
    }
    for (const std::string& synonym : synonyms) {
      std::vector<Edit> edits;
      for (const Span& s : spans) edits.push_back({s, synonym});
      out.push_back(MakeVariant(
          prompt, technique, ApplyEdits(prompt, edits),
          {{"token", target.text},
           {"synonym", synonym},
           {"mode", mode == SynonymMode::kAllOccurrences ? "all_occurrences"
                                                         : "ranked_occurrence"},
           {"target_start", target.span.start},
           {"occurrences_replaced", spans.size()}}));
    }
  }
  return out;
}

std::vector<PromptVariant> SentenceRemove(std::string_view prompt, const PerturbConfig& cfg) {
  cfg.Validate();
  const auto sentences = importance::SplitSentences(prompt);
  const size_t n = sentences.size();
  if (n == 0) throw PreconditionError("prompt has no sentences");
  const size_t w =
      std::max<size_t>(1, n / static_cast<size_t>(cfg.sentence_fraction_denominator));
  std::vector<PromptVariant> out;
  for (size_t start = 0; start + w <= n; ++start) {
    Span region;
    if (start + w < n) {
      region = {sentences[start].start, sentences[start + w].start};
    } else if (start > 0) {
      region = {sentences[start - 1].end, sentences[n - 1].end};
    } else {
      region = {sentences[0].start, sentences[n - 1].end};
    }
    std::string text = ApplyEdits(prompt, {{region, ""}});
    const bool empty = text.find_first_not_of(" \t\r\n") == std::string::npos;
    out.push_back(MakeVariant(prompt, Technique::kSentenceRemove, std::move(text),
                              {{"window_start", start},
                               {"window_size", w},
                               {"sentence_count", n},
                               {"remainder_empty", empty}}));
  }
  return out;
}

std::vector<PromptVariant> SentenceRephrase(std::string_view prompt,
                                            const importance::SentenceRanking& ranking,
                                            TextProvider& provider, int count,
                                            std::vector<PerturbWarning>* warnings) {
  if (ranking.sentences.empty()) throw PreconditionError("sentence ranking is empty");
  if (count < 1) throw PreconditionError("count must be >= 1");
  const size_t m = std::min(ranking.sentences.size(), static_cast<size_t>(count));
  std::vector<PromptVariant> out;
  for (size_t rank = 0; rank < m; ++rank) {
    const auto& s = ranking.sentences[rank];
    if (s.span.end > prompt.size()) {
      throw PreconditionError("sentence span lies outside the prompt");
    }
    const std::string original(prompt.substr(s.span.start, s.span.size()));
    std::string rewrite;
    try {
      rewrite = provider.Rephrase(original);
    } catch (const ProviderError& e) {
      if (warnings) {
        warnings->push_back({"", Technique::kSentenceRephrase,
                             "skipped sentence " + std::to_string(s.position) + ": " +
                                 e.what()});
      }
      continue;
    }
    out.push_back(MakeVariant(prompt, Technique::kSentenceRephrase,
                              ApplyEdits(prompt, {{s.span, rewrite}}),
                              {{"rank", rank},
                               {"sentence_position", s.position},
                               {"original", original},
                               {"rephrased", rewrite}}));
  }
  return out;
}

PromptVariant RandomReplace(std::string_view prompt,
                            std::span<const corpus::Identifier> identifiers, uint64_t seed) {
  if (identifiers.empty()) throw PreconditionError("random_replace needs identifiers");
  for (const auto& ident : identifiers) {
    if (ident.name.empty() || FindWholeWord(prompt, ident.name).empty()) {
      throw PreconditionError("identifier '" + ident.name + "' not found in prompt");
    }
  }
  SeededRng rng(seed);
  for (int attempt = 1; attempt <= kMaxReplaceAttempts; ++attempt) {
    std::vector<std::pair<std::string, std::string>> stems;  // stem -> replacement
    std::set<std::string> used;
    auto replacement_for = [&](const std::string& stem) -> std::string {
      for (const auto& [s, r] : stems) {
        if (s == stem) return r;
      }
      const size_t len = CodepointCount(stem);
      for (int draw = 0; draw < kMaxDrawsPerStem; ++draw) {
        std::string candidate;
        for (size_t i = 0; i < len; ++i) {
          candidate.push_back(static_cast<char>('a' + rng.Uniform(26)));
        }
        if (prompt.find(candidate) == std::string_view::npos && !used.count(candidate)) {
          used.insert(candidate);
          stems.emplace_back(stem, candidate);
          return candidate;
        }
      }
      throw Error("no collision-free replacement exists for '" + stem + "'");
    };

    NameMap map;
    std::set<std::string> seen_names;
    json names = json::array();
    for (const auto& ident : identifiers) {
      if (!seen_names.insert(ident.name).second) continue;
      const NameParts parts = SplitName(ident);
      map.emplace_back(ident.name, parts.dir + replacement_for(parts.stem) + parts.ext);
      names.push_back(ident.name);
    }
    std::string text = WholeWordSubstitute(prompt, map);

    NameMap reverse;
    for (const auto& [orig, repl] : map) reverse.emplace_back(repl, orig);
    if (SubstituteLongestFirst(text, reverse) != prompt) continue;

    PromptVariant v = MakeVariant(prompt, Technique::kRandomReplace, std::move(text),
                                  {{"seed", seed}, {"identifiers", names},
                                   {"attempts", attempt}});
    v.name_map = std::move(map);
    return v;
  }
  throw Error("random_replace could not find a reversible substitution");
}

VariantSet GenerateAll(const corpus::Problem& problem,
                       const importance::TokenAttribution& attr,
                       const importance::SentenceRanking& ranking, TextProvider& provider,
                       const HomoglyphTable& table, const PerturbConfig& cfg,
                       std::span<const Technique> techniques) {
  cfg.Validate();
  const std::string_view prompt = problem.prompt_text;
  if (attr.prompt_hash != Sha256Hex(prompt)) {
    throw PreconditionError("attribution was computed for a different prompt");
  }
  const auto targets = importance::TopKTokens(attr, cfg.k_top_tokens);
  auto enabled = [&](Technique t) {
    return techniques.empty() ||
           std::find(techniques.begin(), techniques.end(), t) != techniques.end();
  };
  auto seed_for = [&](Technique t) {
    return DeriveSeed(cfg.seed, problem.id + "/" + std::string(ToString(t)));
  };

  VariantSet set;
  for (Technique t : kAllTechniques) {
    if (!enabled(t)) continue;
    const size_t first_new = set.variants.size();
    const size_t first_warning = set.warnings.size();
    try {
      switch (t) {
        case Technique::kCharacterRemove:
          set.variants.push_back(CharacterRemove(prompt, targets, seed_for(t)));
          break;
        case Technique::kTokenRemove:
          set.variants.push_back(TokenRemove(prompt, targets));
          break;
        case Technique::kRandomInsert:
          set.variants.push_back(RandomInsert(prompt, targets, seed_for(t), cfg));
          break;
        case Technique::kTokenUnicode:
          set.variants.push_back(
              UnicodeSubstitute(prompt, UnicodeScope::kTargets, targets, table));
          break;
        case Technique::kPromptUnicode:
          set.variants.push_back(
              UnicodeSubstitute(prompt, UnicodeScope::kWholePrompt, {}, table));
          break;
        case Technique::kTokenSynonym:
        case Technique::kTokensSynonym: {
          const auto mode = t == Technique::kTokenSynonym ? SynonymMode::kAllOccurrences
                                                          : SynonymMode::kRankedOccurrence;
          auto vs = SynonymSubstitute(prompt, targets, provider, mode, cfg, &set.warnings);
          set.variants.insert(set.variants.end(), vs.begin(), vs.end());
          break;
        }
        case Technique::kSentenceRemove: {
          auto vs = SentenceRemove(prompt, cfg);
          set.variants.insert(set.variants.end(), vs.begin(), vs.end());
          break;
        }
        case Technique::kSentenceRephrase: {
          auto vs = SentenceRephrase(prompt, ranking, provider, cfg.rephrase_count,
                                     &set.warnings);
          set.variants.insert(set.variants.end(), vs.begin(), vs.end());
          break;
        }
        case Technique::kRandomReplace:
          if (problem.identifiers.empty()) {
            set.warnings.push_back({"", t, "no identifiers declared; technique skipped"});
          } else {
            set.variants.push_back(RandomReplace(prompt, problem.identifiers, seed_for(t)));
          }
          break;
      }
    } catch (const Error& e) {
      set.variants.resize(first_new);
      set.warnings.push_back({"", t, e.what()});
    }
    for (size_t i = first_warning; i < set.warnings.size(); ++i) {
      set.warnings[i].problem_id = problem.id;
    }
  }
  for (auto& v : set.variants) v.problem_id = problem.id;
  return set;
}

std::string VariantsToJsonl(std::span<const PromptVariant> variants) {
  std::string out;
  for (const auto& v : variants) {
    out += ToJson(v).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<PromptVariant> VariantsFromJsonl(std::string_view jsonl) {
  std::vector<PromptVariant> out;
  size_t pos = 0;
  while (pos < jsonl.size()) {
    size_t eol = jsonl.find('\n', pos);
    if (eol == std::string_view::npos) eol = jsonl.size();
    const auto line = jsonl.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    out.push_back(VariantFromJson(json::parse(line)));
  }
  return out;
}

}  // namespace perturbkit::perturb
