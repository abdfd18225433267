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

#ifndef PERTURBKIT_COMMON_TEXT_H_
#define PERTURBKIT_COMMON_TEXT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perturbkit {

// Half-open byte range [start, end) into a UTF-8 string.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t size() const { return end - start; }
  bool Contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// Letters, digits and underscore in ASCII; every non-ASCII codepoint except
// whitespace and general punctuation also counts, so accented homoglyphs stay
// inside words.
bool IsWordCodepoint(char32_t cp);

// Word-ness of the codepoint covering byte `pos` (pos may point into the
// middle of a sequence).
bool IsWordCharAt(std::string_view text, size_t pos);

bool IsHorizontalSpace(char c);

// Removes `spans` (sorted, non-overlapping) from `text`. Horizontal
// whitespace left doubled by a removal is collapsed, and whitespace left
// dangling at a line edge is dropped.
std::string DeleteSpans(std::string_view text, std::span<const Span> spans);

// Replaces spans (sorted, non-overlapping) with the paired strings.
std::string ReplaceSpans(std::string_view text,
                         std::span<const std::pair<Span, std::string>> edits);

// Whole-word occurrences of `needle` in `text`: the match may not be
// preceded or followed by a word character.
std::vector<Span> FindWholeWord(std::string_view text, std::string_view needle);

// Single left-to-right pass; at each position the longest matching `from`
// string wins and its output is never rescanned.
std::string SubstituteLongestFirst(
    std::string_view text,
    std::span<const std::pair<std::string, std::string>> from_to);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_TEXT_H_
