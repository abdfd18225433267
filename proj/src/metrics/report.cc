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

#include "perturbkit/metrics/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace perturbkit::metrics {
namespace {

using nlohmann::json;

json Optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string Fixed(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

std::string Row(const std::vector<std::string>& cells, const std::vector<size_t>& widths) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i == 0) {
      out += cells[i] + std::string(widths[i] - cells[i].size(), ' ');
    } else {
      out += "  " + std::string(widths[i] - cells[i].size(), ' ') + cells[i];
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

std::string Table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }
  std::string out = Row(rows.front(), widths);
  size_t total = 0;
  for (size_t w : widths) total += w;
  out += std::string(total + 2 * (widths.size() - 1), '-') + "\n";
  for (size_t i = 1; i < rows.size(); ++i) out += Row(rows[i], widths);
  return out;
}

}  // namespace

Summary Summarize(std::span<const EfficacyRecord> records, std::span<const std::string> order) {
  Summary s;
  std::set<std::string> problems;
  for (const auto& r : records) problems.insert(r.problem_id);
  s.problem_count = problems.size();
  if (!records.empty()) s.combined_efficacy = CombinedEfficacy(records);

  const auto best = BestByTechnique(records);
  std::vector<std::string> names;
  for (const auto& t : order) {
    if (best.count(t) && std::find(names.begin(), names.end(), t) == names.end()) {
      names.push_back(t);
    }
  }
  for (const auto& [t, _] : best) {
    if (std::find(names.begin(), names.end(), t) == names.end()) names.push_back(t);
  }

  for (const auto& name : names) {
    TechniqueSummary t;
    t.technique = name;
    const auto& per_problem = best.at(name);
    t.problems_evaluated = per_problem.size();
    double sum = 0;
    for (const auto& [p, e] : per_problem) {
      sum += e;
      if (e > 0) ++t.problems_positive;
    }
    t.mean_efficacy = sum / static_cast<double>(t.problems_evaluated);
    t.coverage = 100.0 * static_cast<double>(t.problems_positive) /
                 static_cast<double>(t.problems_evaluated);
    double change = 0, change_pos = 0;
    size_t n_change = 0, n_change_pos = 0;
    for (const auto& r : records) {
      if (r.technique != name) continue;
      ++t.records;
      if (!r.change_pct) continue;
      change += *r.change_pct;
      ++n_change;
      if (r.efficacy > 0) {
        change_pos += *r.change_pct;
        ++n_change_pos;
      }
    }
    if (n_change) t.mean_change_pct = change / static_cast<double>(n_change);
    if (n_change_pos) t.mean_change_pct_positive = change_pos / static_cast<double>(n_change_pos);
    s.techniques.push_back(std::move(t));
  }
  return s;
}

json ToJson(const Summary& s) {
  json techniques = json::array();
  for (const auto& t : s.techniques) {
    techniques.push_back({{"technique", t.technique},
                          {"records", t.records},
                          {"problems_evaluated", t.problems_evaluated},
                          {"problems_positive", t.problems_positive},
                          {"coverage", t.coverage},
                          {"mean_efficacy", t.mean_efficacy},
                          {"mean_change_pct", Optional(t.mean_change_pct)},
                          {"mean_change_pct_positive", Optional(t.mean_change_pct_positive)}});
  }
  return {{"problem_count", s.problem_count},
          {"combined_efficacy", Optional(s.combined_efficacy)},
          {"techniques", techniques}};
}

std::string RenderEfficacyTable(const Summary& s) {
  std::vector<std::vector<std::string>> rows = {
      {"technique", "problems", "positive", "coverage%", "mean_efficacy"}};
  for (const auto& t : s.techniques) {
    rows.push_back({t.technique, std::to_string(t.problems_evaluated),
                    std::to_string(t.problems_positive), Fixed(t.coverage),
                    Fixed(t.mean_efficacy)});
  }
  std::string out = Table(rows);
  out += "combined efficacy over " + std::to_string(s.problem_count) +
         " problems: " + Fixed(s.combined_efficacy) + "\n";
  return out;
}

std::string RenderChangeTable(const Summary& s) {
  std::vector<std::vector<std::string>> rows = {
      {"technique", "records", "mean_change%", "mean_change%_positive"}};
  for (const auto& t : s.techniques) {
    rows.push_back({t.technique, std::to_string(t.records), Fixed(t.mean_change_pct),
                    Fixed(t.mean_change_pct_positive)});
  }
  return Table(rows);
}

}  // namespace perturbkit::metrics
