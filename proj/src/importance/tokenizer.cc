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

#include "perturbkit/importance/tokenizer.h"

#include "perturbkit/common/utf8.h"

namespace perturbkit::importance {

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t pos = 0;
  size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const size_t len = Utf8SequenceLength(text, pos);
    const bool word = IsWordCodepoint(DecodeCodepointAt(text, pos));
    if (word && start == std::string_view::npos) start = pos;
    if (!word && start != std::string_view::npos) {
      tokens.push_back({std::string(text.substr(start, pos - start)), {start, pos},
                        tokens.size()});
      start = std::string_view::npos;
    }
    pos += len;
  }
  if (start != std::string_view::npos) {
    tokens.push_back({std::string(text.substr(start)), {start, text.size()}, tokens.size()});
  }
  return tokens;
}

}  // namespace perturbkit::importance
