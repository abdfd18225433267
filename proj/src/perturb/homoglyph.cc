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

#include "perturbkit/perturb/homoglyph.h"

#include <string>

#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/utf8.h"

namespace perturbkit::perturb {
namespace {

std::optional<char32_t> ParseColumn(std::string_view col) {
  if (col.size() > 2 && (col.substr(0, 2) == "U+" || col.substr(0, 2) == "u+")) {
    try {
      size_t used = 0;
      const std::string hex(col.substr(2));
      const unsigned long v = std::stoul(hex, &used, 16);
      if (used != hex.size() || v > 0x10FFFF) return std::nullopt;
      return static_cast<char32_t>(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (col.empty() || Utf8SequenceLength(col, 0) != col.size()) return std::nullopt;
  return DecodeCodepointAt(col, 0);
}

}  // namespace

HomoglyphTable HomoglyphTable::Default() {
  static const std::u32string kLower =
      U"àḃċḋèḟġḣìĵḳĺṁñòṗԛŕśṫùṿẁẋýż";
  static const std::u32string kUpper =
      U"ÀḂĊḊÈḞĠḢÌĴḲĹṀÑÒṖԚŔŚṪÙṾẀẊÝŻ";
  std::map<char32_t, char32_t> entries;
  for (char32_t i = 0; i < 26; ++i) {
    entries[U'a' + i] = kLower[i];
    entries[U'A' + i] = kUpper[i];
  }
  return HomoglyphTable(std::move(entries));
}

HomoglyphTable HomoglyphTable::Parse(std::string_view contents) {
  std::map<char32_t, char32_t> entries;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= contents.size()) {
    size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const size_t tab = line.find('\t');
    const auto src = tab == std::string_view::npos ? std::nullopt
                                                   : ParseColumn(line.substr(0, tab));
    const auto dst = tab == std::string_view::npos ? std::nullopt
                                                   : ParseColumn(line.substr(tab + 1));
    if (!src || !dst) {
      throw Error("homoglyph table line " + std::to_string(line_no) +
                  ": expected 'source<TAB>replacement' single codepoints");
    }
    entries[*src] = *dst;
  }
  return HomoglyphTable(std::move(entries));
}

HomoglyphTable HomoglyphTable::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

std::optional<char32_t> HomoglyphTable::Lookup(char32_t cp) const {
  if (auto it = entries_.find(cp); it != entries_.end()) return it->second;
  return std::nullopt;
}

}  // namespace perturbkit::perturb
