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

#ifndef PERTURBKIT_IMPORTANCE_SENTENCES_H_
#define PERTURBKIT_IMPORTANCE_SENTENCES_H_

#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/text.h"
#include "perturbkit/importance/shapley.h"

namespace perturbkit::importance {

// Sentence spans in document order, trimmed of surrounding whitespace. A
// sentence ends at a run of terminal punctuation (. ! ?, plus any closing
// quotes or brackets) followed by whitespace or end of text, or at a blank
// line. Text without a terminator is one sentence.
std::vector<Span> SplitSentences(std::string_view text);

struct RankedSentence {
  Span span;
  double accumulated_value = 0;
  size_t position = 0;  // index in document order
  friend bool operator==(const RankedSentence&, const RankedSentence&) = default;
};

// Sentences sorted by accumulated token value, descending; ties keep document
// order.
struct SentenceRanking {
  std::vector<RankedSentence> sentences;
  friend bool operator==(const SentenceRanking&, const SentenceRanking&) = default;
};

nlohmann::json ToJson(const SentenceRanking& ranking);
SentenceRanking RankingFromJson(const nlohmann::json& j);

// Each sentence scores the sum of the values of tokens lying inside its span.
// Throws PreconditionError when `attr` was computed for a different prompt.
SentenceRanking RankSentences(std::string_view prompt, const TokenAttribution& attr);

}  // namespace perturbkit::importance

#endif  // PERTURBKIT_IMPORTANCE_SENTENCES_H_
