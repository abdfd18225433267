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

#include "perturbkit/common/text.h"

#include <algorithm>

#include "perturbkit/common/utf8.h"

namespace perturbkit {

bool IsWordCodepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9') || cp == '_';
  }
  if (cp == 0x85 || cp == 0xA0 || cp == 0x1680 || cp == 0xFEFF) return false;
  if (cp >= 0x80 && cp <= 0xBF && cp != 0xAA && cp != 0xB2 && cp != 0xB3 &&
      cp != 0xB5 && cp != 0xB9 && cp != 0xBA) {
    return false;  // Latin-1 punctuation and symbols
  }
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  return true;
}

bool IsWordCharAt(std::string_view text, size_t pos) {
  // Walk back to the lead byte of the sequence covering `pos`.
  size_t lead = pos;
  while (lead > 0 && (static_cast<unsigned char>(text[lead]) & 0xC0) == 0x80 &&
         pos - lead < 3) {
    --lead;
  }
  if (lead + Utf8SequenceLength(text, lead) <= pos) lead = pos;
  return IsWordCodepoint(DecodeCodepointAt(text, lead));
}

bool IsHorizontalSpace(char c) { return c == ' ' || c == '\t'; }

std::string DeleteSpans(std::string_view text, std::span<const Span> spans) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  for (const Span& span : spans) {
    out.append(text.substr(pos, span.start - pos));
    pos = span.end;
    const bool at_line_start = out.empty() || out.back() == '\n';
    const bool after_space = !out.empty() && IsHorizontalSpace(out.back());
    if (at_line_start || after_space) {
      while (pos < text.size() && IsHorizontalSpace(text[pos])) ++pos;
    }
    const bool at_line_end =
        pos >= text.size() || text[pos] == '\n' || text[pos] == '\r';
    if (at_line_end) {
      while (!out.empty() && IsHorizontalSpace(out.back())) out.pop_back();
    }
  }
  out.append(text.substr(pos));
  return out;
}

std::string ReplaceSpans(std::string_view text,
                         std::span<const std::pair<Span, std::string>> edits) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  for (const auto& [span, replacement] : edits) {
    out.append(text.substr(pos, span.start - pos));
    out.append(replacement);
    pos = span.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::vector<Span> FindWholeWord(std::string_view text, std::string_view needle) {
  std::vector<Span> out;
  if (needle.empty()) return out;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + 1)) {
    const size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !IsWordCharAt(text, pos - 1);
    const bool right_ok = end >= text.size() || !IsWordCharAt(text, end);
    if (left_ok && right_ok) out.push_back({pos, end});
  }
  return out;
}

std::string SubstituteLongestFirst(
    std::string_view text,
    std::span<const std::pair<std::string, std::string>> from_to) {
  std::vector<const std::pair<std::string, std::string>*> order;
  for (const auto& entry : from_to) {
    if (!entry.first.empty()) order.push_back(&entry);
  }
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return a->first.size() > b->first.size();
  });
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (const auto* entry : order) {
      if (text.compare(pos, entry->first.size(), entry->first) == 0) {
        out.append(entry->second);
        pos += entry->first.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(text[pos++]);
  }
  return out;
}

}  // namespace perturbkit
