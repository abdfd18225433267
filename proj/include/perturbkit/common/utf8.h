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

#ifndef PERTURBKIT_COMMON_UTF8_H_
#define PERTURBKIT_COMMON_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace perturbkit {

// Byte length of the UTF-8 sequence starting at `text[pos]`. Malformed or
// truncated sequences count as a single byte so that every byte string
// round-trips through codepoint iteration.
size_t Utf8SequenceLength(std::string_view text, size_t pos);

// Byte offsets of every codepoint start, plus a final entry equal to
// text.size().
std::vector<size_t> CodepointBoundaries(std::string_view text);

size_t CodepointCount(std::string_view text);

// Decodes to codepoints. Malformed bytes decode to their byte value so the
// mapping stays total.
std::u32string DecodeUtf8(std::string_view text);

std::string EncodeUtf8(char32_t codepoint);
std::string EncodeUtf8(std::u32string_view codepoints);

// Decodes exactly one codepoint at `pos`.
char32_t DecodeCodepointAt(std::string_view text, size_t pos);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_UTF8_H_
