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

#include "perturbkit/importance/sentences.h"

#include <algorithm>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"

namespace perturbkit::importance {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool IsCloser(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

// True when a blank line starts at `pos` (which points at a '\n').
bool BlankLineAt(std::string_view text, size_t pos) {
  size_t i = pos + 1;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
  return i < text.size() && text[i] == '\n';
}

}  // namespace

std::vector<Span> SplitSentences(std::string_view text) {
  std::vector<Span> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    if (pos >= text.size()) break;
    const size_t start = pos;
    size_t end = text.size();
    while (pos < text.size()) {
      const char c = text[pos];
      if (IsTerminal(c)) {
        size_t after = pos;
        while (after < text.size() && IsTerminal(text[after])) ++after;
        while (after < text.size() && IsCloser(text[after])) ++after;
        if (after >= text.size() || IsSpace(text[after])) {
          end = after;
          pos = after;
          break;
        }
        pos = after;
        continue;
      }
      if (c == '\n' && BlankLineAt(text, pos)) {
        end = pos;
        break;
      }
      ++pos;
    }
    while (end > start && IsSpace(text[end - 1])) --end;
    out.push_back({start, end});
  }
  return out;
}

nlohmann::json ToJson(const SentenceRanking& ranking) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : ranking.sentences) {
    arr.push_back({{"start", s.span.start},
                   {"end", s.span.end},
                   {"position", s.position},
                   {"accumulated_value", s.accumulated_value}});
  }
  return {{"sentences", arr}};
}

SentenceRanking RankingFromJson(const nlohmann::json& j) {
  SentenceRanking r;
  for (const auto& s : j.at("sentences")) {
    r.sentences.push_back({{s.at("start").get<size_t>(), s.at("end").get<size_t>()},
                           s.at("accumulated_value").get<double>(),
                           s.at("position").get<size_t>()});
  }
  return r;
}

SentenceRanking RankSentences(std::string_view prompt, const TokenAttribution& attr) {
  if (attr.prompt_hash != Sha256Hex(prompt)) {
    throw PreconditionError("attribution was computed for a different prompt");
  }
  SentenceRanking ranking;
  const auto spans = SplitSentences(prompt);
  for (size_t i = 0; i < spans.size(); ++i) {
    double sum = 0;
    for (size_t t = 0; t < attr.tokens.size(); ++t) {
      if (spans[i].Contains(attr.tokens[t].span)) sum += attr.values[t];
    }
    ranking.sentences.push_back({spans[i], sum, i});
  }
  std::stable_sort(ranking.sentences.begin(), ranking.sentences.end(),
                   [](const RankedSentence& a, const RankedSentence& b) {
                     return a.accumulated_value > b.accumulated_value;
                   });
  return ranking;
}

}  // namespace perturbkit::importance
