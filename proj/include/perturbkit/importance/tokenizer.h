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

#ifndef PERTURBKIT_IMPORTANCE_TOKENIZER_H_
#define PERTURBKIT_IMPORTANCE_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/common/text.h"

namespace perturbkit::importance {

// A word-level attribution unit. `span` holds byte offsets into the prompt.
struct Token {
  std::string text;
  Span span;
  size_t index = 0;
  friend bool operator==(const Token&, const Token&) = default;
};

// Maximal runs of word characters (see IsWordCodepoint). Everything else is
// skipped and never becomes an attribution unit.
std::vector<Token> Tokenize(std::string_view text);

}  // namespace perturbkit::importance

#endif  // PERTURBKIT_IMPORTANCE_TOKENIZER_H_
