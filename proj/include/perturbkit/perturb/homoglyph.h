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

#ifndef PERTURBKIT_PERTURB_HOMOGLYPH_H_
#define PERTURBKIT_PERTURB_HOMOGLYPH_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string_view>

namespace perturbkit::perturb {

// Maps a source codepoint to a visually similar single codepoint.
class HomoglyphTable {
 public:
  HomoglyphTable() = default;
  explicit HomoglyphTable(std::map<char32_t, char32_t> entries)
      : entries_(std::move(entries)) {}

  // The built-in Latin table; identical to data/homoglyphs.tsv.
  static HomoglyphTable Default();

  // Parses the TSV format: `source<TAB>replacement` per line, where each
  // column is one literal character or U+XXXX; blank lines and lines starting
  // with '#' are ignored. Throws Error with the line number on bad input.
  static HomoglyphTable Parse(std::string_view contents);
  static HomoglyphTable Load(const std::filesystem::path& path);

  std::optional<char32_t> Lookup(char32_t cp) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::map<char32_t, char32_t>& entries() const { return entries_; }

  friend bool operator==(const HomoglyphTable&, const HomoglyphTable&) = default;

 private:
  std::map<char32_t, char32_t> entries_;
};

}  // namespace perturbkit::perturb

#endif  // PERTURBKIT_PERTURB_HOMOGLYPH_H_
