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

#include "perturbkit/metrics/edit_distance.h"

#include "perturbkit/common/error.h"
#include "perturbkit/common/utf8.h"

namespace perturbkit::metrics {

size_t EditDistance(std::string_view a, std::string_view b) {
  const std::u32string ca = DecodeUtf8(a);
  const std::u32string cb = DecodeUtf8(b);
  return Levenshtein<char32_t>(ca, cb);
}

double ChangePct(std::string_view a, std::string_view b) {
  const size_t len = CodepointCount(a);
  if (len == 0) throw DomainError("change percentage of an empty prompt");
  return 100.0 * static_cast<double>(EditDistance(a, b)) / static_cast<double>(len);
}

}  // namespace perturbkit::metrics
