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

#ifndef PERTURBKIT_METRICS_EFFICACY_H_
#define PERTURBKIT_METRICS_EFFICACY_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace perturbkit::metrics {

// Relative drop of a correctness score, clamped at zero:
//   max(0, 100 * (s_base - s_pert) / s_base).
// Both scores live in [0, 100]. Throws DomainError when s_base is 0 (or
// either score is out of range).
double Efficacy(double s_base, double s_pert);

struct EfficacyRecord {
  std::string problem_id;
  std::string technique;
  std::string variant_digest;
  double s_no_prtrb = 0;
  double s_prtrb = 0;
  double efficacy = 0;
  // Codepoint edit distance of the variant as a percentage of the prompt.
  std::optional<double> change_pct;
  friend bool operator==(const EfficacyRecord&, const EfficacyRecord&) = default;
};

// Fills in efficacy from the two scores.
EfficacyRecord MakeRecord(std::string problem_id, std::string technique,
                          std::string variant_digest, double s_base, double s_pert,
                          std::optional<double> change_pct = std::nullopt);

nlohmann::json ToJson(const EfficacyRecord& r);
// Validates ranges and recomputes efficacy; a mismatching stored value throws.
EfficacyRecord RecordFromJson(const nlohmann::json& j);

// Mean over problems of each problem's best efficacy. Throws
// PreconditionError for no problems or an empty group.
double CombinedEfficacy(const std::map<std::string, std::vector<double>>& by_problem);
double CombinedEfficacy(std::span<const EfficacyRecord> records);

// Best efficacy per (technique, problem).
std::map<std::string, std::map<std::string, double>> BestByTechnique(
    std::span<const EfficacyRecord> records);

// Per technique: percentage of the problems it was evaluated on where its
// best variant had efficacy > 0.
std::map<std::string, double> Coverage(std::span<const EfficacyRecord> records);

// Per technique: mean over its problems of the best efficacy.
std::map<std::string, double> MeanEfficacy(std::span<const EfficacyRecord> records);

}  // namespace perturbkit::metrics

#endif  // PERTURBKIT_METRICS_EFFICACY_H_
