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

#include "perturbkit/genclient/codegen.h"

#include <algorithm>
#include <cctype>
#include <optional>

namespace perturbkit::genclient {
namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (true) {
    const size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

std::string_view TrimRight(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Join(const std::vector<std::string>& blocks) {
  std::string out;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) out.push_back('\n');
    out += blocks[i];
  }
  return out;
}

// Line-delimited fences. `is_open` recognises an opening line, `is_close` a
// closing one. An unterminated block runs to the end of the text.
template <typename Open, typename Close>
std::optional<std::string> ExtractLineFenced(std::string_view text, Open is_open,
                                             Close is_close) {
  const auto lines = SplitLines(text);
  std::vector<std::string> blocks;
  bool inside = false;
  std::string current;
  bool current_empty = true;
  for (std::string_view line : lines) {
    if (!inside) {
      if (is_open(line)) {
        inside = true;
        current.clear();
        current_empty = true;
      }
      continue;
    }
    if (is_close(line)) {
      blocks.push_back(current);
      inside = false;
      continue;
    }
    if (!current_empty) current.push_back('\n');
    current += line;
    current_empty = false;
  }
  if (inside) blocks.push_back(current);
  if (blocks.empty()) return std::nullopt;
  return Join(blocks);
}

std::string_view StripFenceIndent(std::string_view line) {
  size_t i = 0;
  while (i < line.size() && i < 3 && line[i] == ' ') ++i;
  return line.substr(i);
}

bool IsBacktickOpen(std::string_view line) {
  const auto s = StripFenceIndent(line);
  if (s.substr(0, 3) != "```") return false;
  // An info string may follow, but no further backticks.
  return s.find('`', 3) == std::string_view::npos;
}

bool IsBacktickClose(std::string_view line) {
  return TrimRight(StripFenceIndent(line)) == "```";
}

bool IsQuoteOpen(std::string_view line) {
  if (line.substr(0, 3) != "'''") return false;
  const auto rest = TrimRight(line.substr(3));
  return std::all_of(rest.begin(), rest.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

bool IsQuoteClose(std::string_view line) { return TrimRight(line) == "'''"; }

std::optional<std::string> ExtractPythonMarkers(std::string_view text) {
  static constexpr std::string_view kOpen = "[PYTHON]";
  static constexpr std::string_view kClose = "[/PYTHON]";
  std::vector<std::string> blocks;
  size_t pos = 0;
  while (true) {
    const size_t open = text.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    size_t start = open + kOpen.size();
    size_t close = text.find(kClose, start);
    const size_t end = close == std::string_view::npos ? text.size() : close;
    std::string_view inner = text.substr(start, end - start);
    if (!inner.empty() && inner.front() == '\n') inner.remove_prefix(1);
    if (!inner.empty() && inner.back() == '\n') inner.remove_suffix(1);
    blocks.emplace_back(inner);
    if (close == std::string_view::npos) break;
    pos = close + kClose.size();
  }
  if (blocks.empty()) return std::nullopt;
  return Join(blocks);
}

std::optional<std::string> ExtractOnce(std::string_view text) {
  if (auto r = ExtractLineFenced(text, IsBacktickOpen, IsBacktickClose)) return r;
  if (auto r = ExtractPythonMarkers(text)) return r;
  if (auto r = ExtractLineFenced(text, IsQuoteOpen, IsQuoteClose)) return r;
  return std::nullopt;
}

}  // namespace

std::string BuildCodegenPrompt(std::string_view problem_text) {
  std::string out = "Write a Python program that does the following:\n\n";
  out += problem_text;
  out += "\n\nPlease omit any explanations of the code.";
  return out;
}

std::string ExtractCode(std::string_view raw_response) {
  std::string current(raw_response);
  // Every successful step removes at least one marker, so this terminates.
  while (auto next = ExtractOnce(current)) {
    if (*next == current) break;
    current = std::move(*next);
  }
  return current;
}

std::vector<std::string> DefaultRefusalPhrases() {
  return {"academic integrity",
          "academic dishonesty",
          "i'm sorry, but i can't",
          "i am sorry, but i cannot",
          "i cannot help you with",
          "i can't help with",
          "i can't assist with",
          "i cannot assist with",
          "i'm not able to provide",
          "i am not able to provide",
          "i cannot complete your homework",
          "against my guidelines"};
}

bool LooksLikeRefusal(std::string_view raw_response,
                      const std::vector<std::string>& phrases) {
  std::string lowered(raw_response);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& phrase : phrases) {
    std::string p = phrase;
    std::transform(p.begin(), p.end(), p.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!p.empty() && lowered.find(p) != std::string::npos) return true;
  }
  return false;
}

}  // namespace perturbkit::genclient
