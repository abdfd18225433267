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

#ifndef PERTURBKIT_METRICS_REPORT_H_
#define PERTURBKIT_METRICS_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/metrics/efficacy.h"

namespace perturbkit::metrics {

struct TechniqueSummary {
  std::string technique;
  size_t records = 0;
  size_t problems_evaluated = 0;
  size_t problems_positive = 0;
  double coverage = 0;        // percent of evaluated problems with efficacy > 0
  double mean_efficacy = 0;   // mean of per-problem best efficacy
  std::optional<double> mean_change_pct;           // over all records
  std::optional<double> mean_change_pct_positive;  // over records with efficacy > 0
  friend bool operator==(const TechniqueSummary&, const TechniqueSummary&) = default;
};

struct Summary {
  std::vector<TechniqueSummary> techniques;
  size_t problem_count = 0;  // distinct problems with at least one record
  std::optional<double> combined_efficacy;
  friend bool operator==(const Summary&, const Summary&) = default;
};

// Techniques appear in `order` first, then any others alphabetically.
Summary Summarize(std::span<const EfficacyRecord> records,
                  std::span<const std::string> order = {});

nlohmann::json ToJson(const Summary& s);

// Plain-text tables: coverage and mean efficacy per technique, then the
// change budget per technique.
std::string RenderEfficacyTable(const Summary& s);
std::string RenderChangeTable(const Summary& s);

}  // namespace perturbkit::metrics

#endif  // PERTURBKIT_METRICS_REPORT_H_
