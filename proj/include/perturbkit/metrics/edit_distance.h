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

#ifndef PERTURBKIT_METRICS_EDIT_DISTANCE_H_
#define PERTURBKIT_METRICS_EDIT_DISTANCE_H_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

namespace perturbkit::metrics {

// Unit-cost Levenshtein distance over arbitrary element sequences, two-row
// dynamic programme.
template <typename T>
size_t Levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Levenshtein distance between two UTF-8 strings counted in codepoints.
size_t EditDistance(std::string_view a, std::string_view b);

// 100 * EditDistance(a, b) / codepoint length of a. Throws DomainError for an
// empty `a`.
double ChangePct(std::string_view a, std::string_view b);

}  // namespace perturbkit::metrics

#endif  // PERTURBKIT_METRICS_EDIT_DISTANCE_H_
