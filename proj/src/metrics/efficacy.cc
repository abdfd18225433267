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

#include "perturbkit/metrics/efficacy.h"

#include <algorithm>
#include <cmath>

#include "perturbkit/common/error.h"

namespace perturbkit::metrics {
namespace {

using nlohmann::json;

bool InRange(double s) { return std::isfinite(s) && s >= 0 && s <= 100; }

}  // namespace

double Efficacy(double s_base, double s_pert) {
  if (!InRange(s_base) || !InRange(s_pert)) {
    throw DomainError("scores must lie in [0, 100]");
  }
  if (s_base == 0) throw DomainError("efficacy is undefined for a zero base score");
  return std::max(0.0, 100.0 * (s_base - s_pert) / s_base);
}

EfficacyRecord MakeRecord(std::string problem_id, std::string technique,
                          std::string variant_digest, double s_base, double s_pert,
                          std::optional<double> change_pct) {
  EfficacyRecord r;
  r.efficacy = Efficacy(s_base, s_pert);
  r.problem_id = std::move(problem_id);
  r.technique = std::move(technique);
  r.variant_digest = std::move(variant_digest);
  r.s_no_prtrb = s_base;
  r.s_prtrb = s_pert;
  r.change_pct = change_pct;
  return r;
}

json ToJson(const EfficacyRecord& r) {
  json j = {{"problem_id", r.problem_id},   {"technique", r.technique},
            {"variant_digest", r.variant_digest}, {"s_no_prtrb", r.s_no_prtrb},
            {"s_prtrb", r.s_prtrb},         {"efficacy", r.efficacy}};
  j["change_pct"] = r.change_pct ? json(*r.change_pct) : json(nullptr);
  return j;
}

EfficacyRecord RecordFromJson(const json& j) {
  std::optional<double> change;
  if (j.contains("change_pct") && !j.at("change_pct").is_null()) {
    change = j.at("change_pct").get<double>();
  }
  EfficacyRecord r = MakeRecord(j.at("problem_id").get<std::string>(),
                                j.at("technique").get<std::string>(),
                                j.value("variant_digest", ""), j.at("s_no_prtrb").get<double>(),
                                j.at("s_prtrb").get<double>(), change);
  if (j.contains("efficacy") && std::abs(j.at("efficacy").get<double>() - r.efficacy) > 1e-9) {
    throw Error("stored efficacy for '" + r.problem_id + "' disagrees with its scores");
  }
  return r;
}

double CombinedEfficacy(const std::map<std::string, std::vector<double>>& by_problem) {
  if (by_problem.empty()) throw PreconditionError("combined efficacy needs records");
  double sum = 0;
  for (const auto& [problem, values] : by_problem) {
    if (values.empty()) throw PreconditionError("problem '" + problem + "' has no records");
    sum += *std::max_element(values.begin(), values.end());
  }
  return sum / static_cast<double>(by_problem.size());
}

double CombinedEfficacy(std::span<const EfficacyRecord> records) {
  std::map<std::string, std::vector<double>> by_problem;
  for (const auto& r : records) by_problem[r.problem_id].push_back(r.efficacy);
  return CombinedEfficacy(by_problem);
}

std::map<std::string, std::map<std::string, double>> BestByTechnique(
    std::span<const EfficacyRecord> records) {
  std::map<std::string, std::map<std::string, double>> best;
  for (const auto& r : records) {
    auto& slot = best[r.technique];
    auto it = slot.find(r.problem_id);
    if (it == slot.end()) {
      slot.emplace(r.problem_id, r.efficacy);
    } else {
      it->second = std::max(it->second, r.efficacy);
    }
  }
  return best;
}

std::map<std::string, double> Coverage(std::span<const EfficacyRecord> records) {
  std::map<std::string, double> out;
  for (const auto& [technique, problems] : BestByTechnique(records)) {
    const auto positive = std::count_if(problems.begin(), problems.end(),
                                        [](const auto& p) { return p.second > 0; });
    out[technique] = 100.0 * static_cast<double>(positive) / static_cast<double>(problems.size());
  }
  return out;
}

std::map<std::string, double> MeanEfficacy(std::span<const EfficacyRecord> records) {
  std::map<std::string, double> out;
  for (const auto& [technique, problems] : BestByTechnique(records)) {
    double sum = 0;
    for (const auto& [problem, e] : problems) sum += e;
    out[technique] = sum / static_cast<double>(problems.size());
  }
  return out;
}

}  // namespace perturbkit::metrics
