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

#ifndef PERTURBKIT_METRICS_SIMILARITY_H_
#define PERTURBKIT_METRICS_SIMILARITY_H_

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "perturbkit/metrics/pyast.h"

namespace perturbkit::metrics {

// Trees above this many nodes are compared by sequence alignment of their
// preorder (label, depth) listing instead of exact tree edit distance.
inline constexpr size_t kExactNodeBudget = 800;

// A parsed and normalized solution, flattened for comparison.
struct NormalizedCode {
  bool parsed = false;
  std::string raw;                       // kept for the unparsed fallback
  std::vector<std::string> postorder;    // node labels in postorder
  std::vector<size_t> leftmost;          // leftmost leaf of each postorder node
  std::vector<std::pair<std::string, size_t>> preorder;  // (label, depth)

  size_t size() const { return postorder.size(); }
};

// Alpha-renames every name bound in the tree, except `preserved` and dunder
// names, to _v0, _v1, ... in first-occurrence preorder, then flattens.
NormalizedCode NormalizeTree(const AstNode& root, const std::set<std::string>& preserved);

// ParsePython then NormalizeTree; an unparseable input is kept raw.
NormalizedCode Normalize(std::string_view code, const std::set<std::string>& preserved,
                         const std::string& python = "python3");
std::vector<NormalizedCode> NormalizeAll(std::span<const std::string> codes,
                                         const std::set<std::string>& preserved,
                                         const std::string& python = "python3");

// Unit-cost ordered tree edit distance (Zhang and Shasha).
size_t TreeEditDistance(const NormalizedCode& a, const NormalizedCode& b);

struct Similarity {
  double score = 0;           // [0, 100]
  bool fallback = false;      // an input failed to parse; exact string match used
  bool approximate = false;   // node budget exceeded; sequence alignment used
};

// 100 * (1 - distance / max node count).
Similarity Compare(const NormalizedCode& a, const NormalizedCode& b);

Similarity AstSimilarity(std::string_view code_a, std::string_view code_b,
                         const std::set<std::string>& preserved = {},
                         const std::string& python = "python3");

struct VarietyStats {
  std::string problem_id;
  size_t solution_count = 0;
  size_t unique_count = 0;
  double threshold = 90;
  size_t unparsed_count = 0;
  friend bool operator==(const VarietyStats&, const VarietyStats&) = default;
};

nlohmann::json ToJson(const VarietyStats& v);
VarietyStats VarietyFromJson(const nlohmann::json& j);

// Greedy clustering in input order: a solution opens a new cluster when its
// similarity to every kept representative is below `threshold`. Throws
// PreconditionError for no solutions.
VarietyStats UniqueVariants(std::string problem_id, std::span<const NormalizedCode> solutions,
                            double threshold = 90);
VarietyStats UniqueVariants(std::string problem_id, std::span<const std::string> solutions,
                            double threshold = 90, const std::set<std::string>& preserved = {},
                            const std::string& python = "python3");

}  // namespace perturbkit::metrics

#endif  // PERTURBKIT_METRICS_SIMILARITY_H_
