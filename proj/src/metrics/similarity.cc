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

#include "perturbkit/metrics/similarity.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "perturbkit/common/error.h"
#include "perturbkit/metrics/edit_distance.h"

namespace perturbkit::metrics {
namespace {

using nlohmann::json;

bool IsDunder(const std::string& s) {
  return s.size() > 4 && s.starts_with("__") && s.ends_with("__");
}

void CollectBound(const AstNode& node, const std::set<std::string>& preserved,
                  std::set<std::string>* bound) {
  if (node.kind == "id" && node.binds && node.renamable && !preserved.count(node.value) &&
      !IsDunder(node.value)) {
    bound->insert(node.value);
  }
  for (const auto& c : node.children) CollectBound(c, preserved, bound);
}

struct Flattener {
  const std::set<std::string>& bound;
  std::map<std::string, std::string> renames;
  NormalizedCode* out;

  std::string Label(const AstNode& node) {
    if (node.kind != "id") return node.value.empty() ? node.kind : node.kind + ":" + node.value;
    if (!node.renamable || !bound.count(node.value)) return "id:" + node.value;
    auto it = renames.find(node.value);
    if (it == renames.end()) {
      it = renames.emplace(node.value, "_v" + std::to_string(renames.size())).first;
    }
    return "id:" + it->second;
  }

  // Returns the postorder index of `node`.
  size_t Visit(const AstNode& node, size_t depth) {
    std::string label = Label(node);
    out->preorder.emplace_back(label, depth);
    size_t leftmost = SIZE_MAX;
    for (const auto& c : node.children) {
      const size_t idx = Visit(c, depth + 1);
      if (leftmost == SIZE_MAX) leftmost = out->leftmost[idx];
    }
    const size_t self = out->postorder.size();
    out->postorder.push_back(std::move(label));
    out->leftmost.push_back(leftmost == SIZE_MAX ? self : leftmost);
    return self;
  }
};

std::vector<size_t> KeyRoots(const std::vector<size_t>& leftmost) {
  std::vector<size_t> roots;
  std::vector<bool> seen(leftmost.size(), false);
  for (size_t i = leftmost.size(); i-- > 0;) {
    if (!seen[leftmost[i]]) {
      seen[leftmost[i]] = true;
      roots.push_back(i);
    }
  }
  std::reverse(roots.begin(), roots.end());
  return roots;
}

}  // namespace

NormalizedCode NormalizeTree(const AstNode& root, const std::set<std::string>& preserved) {
  std::set<std::string> bound;
  CollectBound(root, preserved, &bound);
  NormalizedCode out;
  out.parsed = true;
  Flattener f{bound, {}, &out};
  f.Visit(root, 0);
  return out;
}

NormalizedCode Normalize(std::string_view code, const std::set<std::string>& preserved,
                         const std::string& python) {
  const auto tree = ParsePython(code, python);
  if (!tree) {
    NormalizedCode out;
    out.raw = std::string(code);
    return out;
  }
  NormalizedCode out = NormalizeTree(*tree, preserved);
  out.raw = std::string(code);
  return out;
}

std::vector<NormalizedCode> NormalizeAll(std::span<const std::string> codes,
                                         const std::set<std::string>& preserved,
                                         const std::string& python) {
  const auto trees = ParsePythonBatch(codes, python);
  std::vector<NormalizedCode> out;
  out.reserve(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    out.push_back(trees[i] ? NormalizeTree(*trees[i], preserved) : NormalizedCode{});
    out.back().raw = codes[i];
  }
  return out;
}

size_t TreeEditDistance(const NormalizedCode& a, const NormalizedCode& b) {
  const size_t n1 = a.size(), n2 = b.size();
  if (n1 == 0 || n2 == 0) return std::max(n1, n2);

  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::vector<std::string>& labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
    return out;
  };
  const std::vector<int> la = intern(a.postorder), lb = intern(b.postorder);
  const auto& ma = a.leftmost;
  const auto& mb = b.leftmost;

  std::vector<size_t> td(n1 * n2, 0);
  std::vector<size_t> fd;
  for (size_t i : KeyRoots(ma)) {
    for (size_t j : KeyRoots(mb)) {
      const size_t li = ma[i], lj = mb[j];
      const size_t rows = i - li + 2, cols = j - lj + 2;
      fd.assign(rows * cols, 0);
      auto at = [&](size_t x, size_t y) -> size_t& { return fd[x * cols + y]; };
      for (size_t x = 1; x < rows; ++x) at(x, 0) = x;
      for (size_t y = 1; y < cols; ++y) at(0, y) = y;
      for (size_t x = 1; x < rows; ++x) {
        const size_t di = li + x - 1;
        for (size_t y = 1; y < cols; ++y) {
          const size_t dj = lj + y - 1;
          const size_t del = at(x - 1, y) + 1;
          const size_t ins = at(x, y - 1) + 1;
          if (ma[di] == li && mb[dj] == lj) {
            const size_t rel = at(x - 1, y - 1) + (la[di] == lb[dj] ? 0 : 1);
            at(x, y) = std::min({del, ins, rel});
            td[di * n2 + dj] = at(x, y);
          } else {
            const size_t sub = at(ma[di] - li, mb[dj] - lj) + td[di * n2 + dj];
            at(x, y) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return td[(n1 - 1) * n2 + (n2 - 1)];
}

Similarity Compare(const NormalizedCode& a, const NormalizedCode& b) {
  Similarity s;
  if (!a.parsed || !b.parsed) {
    s.fallback = true;
    s.score = a.raw == b.raw ? 100 : 0;
    return s;
  }
  const size_t n = std::max(a.size(), b.size());
  if (a.postorder == b.postorder && a.leftmost == b.leftmost) {
    s.score = 100;
    return s;
  }
  size_t distance;
  if (a.size() > kExactNodeBudget || b.size() > kExactNodeBudget) {
    s.approximate = true;
    distance = Levenshtein<std::pair<std::string, size_t>>(a.preorder, b.preorder);
  } else {
    distance = TreeEditDistance(a, b);
  }
  s.score = std::clamp(100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(n)),
                       0.0, 100.0);
  return s;
}

Similarity AstSimilarity(std::string_view code_a, std::string_view code_b,
                         const std::set<std::string>& preserved, const std::string& python) {
  return Compare(Normalize(code_a, preserved, python), Normalize(code_b, preserved, python));
}

json ToJson(const VarietyStats& v) {
  return {{"problem_id", v.problem_id},
          {"solution_count", v.solution_count},
          {"unique_count", v.unique_count},
          {"threshold", v.threshold},
          {"unparsed_count", v.unparsed_count}};
}

VarietyStats VarietyFromJson(const json& j) {
  VarietyStats v;
  v.problem_id = j.at("problem_id").get<std::string>();
  v.solution_count = j.at("solution_count").get<size_t>();
  v.unique_count = j.at("unique_count").get<size_t>();
  v.threshold = j.value("threshold", 90.0);
  v.unparsed_count = j.value("unparsed_count", size_t{0});
  return v;
}

VarietyStats UniqueVariants(std::string problem_id, std::span<const NormalizedCode> solutions,
                            double threshold) {
  if (solutions.empty()) throw PreconditionError("unique_variants needs at least one solution");
  VarietyStats stats;
  stats.problem_id = std::move(problem_id);
  stats.solution_count = solutions.size();
  stats.threshold = threshold;
  std::vector<const NormalizedCode*> reps;
  for (const auto& s : solutions) {
    if (!s.parsed) ++stats.unparsed_count;
    const bool joins = std::any_of(reps.begin(), reps.end(), [&](const NormalizedCode* r) {
      return Compare(s, *r).score >= threshold;
    });
    if (!joins) reps.push_back(&s);
  }
  stats.unique_count = reps.size();
  return stats;
}

VarietyStats UniqueVariants(std::string problem_id, std::span<const std::string> solutions,
                            double threshold, const std::set<std::string>& preserved,
                            const std::string& python) {
  return UniqueVariants(std::move(problem_id), NormalizeAll(solutions, preserved, python),
                        threshold);
}

}  // namespace perturbkit::metrics
