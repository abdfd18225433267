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

#ifndef PERTURBKIT_PIPELINE_STAGES_H_
#define PERTURBKIT_PIPELINE_STAGES_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/corpus/corpus.h"
#include "perturbkit/metrics/efficacy.h"
#include "perturbkit/metrics/report.h"
#include "perturbkit/metrics/similarity.h"
#include "perturbkit/pipeline/config.h"

namespace perturbkit::pipeline {

// One item that could not be processed. The run carries on without it.
struct Failure {
  std::string stage;
  std::string problem_id;
  std::string variant_digest;  // empty when the whole problem failed
  std::string message;
  friend bool operator==(const Failure&, const Failure&) = default;
};

nlohmann::json ToJson(const Failure& f);
Failure FailureFromJson(const nlohmann::json& j);

// Files of a run directory. Every file is written once; rewriting it with
// different bytes is an error.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path Importance(const std::string& problem_id) const;
  std::filesystem::path Variants(const std::string& problem_id) const;
  std::filesystem::path Warnings(const std::string& problem_id) const;
  std::filesystem::path Generations(const std::string& problem_id) const;
  std::filesystem::path Grades(const std::string& problem_id) const;
  std::filesystem::path StageFailures(const std::string& stage) const;
  std::filesystem::path Records() const { return root / "records.jsonl"; }
  std::filesystem::path BaseScores() const { return root / "base_scores.json"; }
  std::filesystem::path Variety() const { return root / "variety.jsonl"; }
  std::filesystem::path Report() const { return root / "report.json"; }
  std::filesystem::path ReportText() const { return root / "report.txt"; }
  std::filesystem::path FailureManifest() const { return root / "failures.json"; }
  std::filesystem::path MetaDir() const { return root / "meta"; }
};

struct StageResult {
  std::vector<Failure> failures;
};

// Shapley attributions and sentence ranking per problem.
StageResult RunImportance(const RunConfig& cfg, const corpus::Corpus& corpus);
// Prompt variants per problem; needs the importance outputs.
StageResult RunPerturb(const RunConfig& cfg, const corpus::Corpus& corpus);
// Candidate solutions for the original prompt and every distinct variant.
StageResult RunGenerate(const RunConfig& cfg, const corpus::Corpus& corpus);
// Oracle results for every stored solution; random_replace solutions are
// graded after name restoration.
StageResult RunGrade(const RunConfig& cfg, const corpus::Corpus& corpus);

struct BaseScore {
  std::string problem_id;
  double score = 0;  // best of the candidates
  bool available = false;
};

// Efficacy records, base scores and variety statistics from stored grades.
struct Scored {
  std::vector<BaseScore> base_scores;
  std::vector<metrics::EfficacyRecord> records;
  std::vector<metrics::VarietyStats> variety;
};
Scored ScoreRun(const RunConfig& cfg, const corpus::Corpus& corpus);

std::string RecordsToJsonl(std::span<const metrics::EfficacyRecord> records);
std::vector<metrics::EfficacyRecord> RecordsFromJsonl(std::string_view jsonl);

// Summary built from records alone.
struct ReportInputs {
  std::vector<metrics::EfficacyRecord> records;
  std::vector<BaseScore> base_scores;
  std::vector<metrics::VarietyStats> variety;
  std::vector<Failure> failures;
  nlohmann::json run = nlohmann::json::object();  // seed, backend, techniques...
};

nlohmann::json BuildReport(const ReportInputs& in);
std::string RenderReportText(const ReportInputs& in);

// Writes records/base scores/variety (from grades when records.jsonl is
// absent), then report.json, report.txt and failures.json.
nlohmann::json RunReport(const RunConfig& cfg, const corpus::Corpus& corpus);

// All stages in order. Returns the report; failures.json lists every item
// that dropped out.
nlohmann::json Evaluate(const RunConfig& cfg);

// Reads every stage failure file under the run directory, in stage order.
std::vector<Failure> CollectFailures(const RunPaths& paths);

}  // namespace perturbkit::pipeline

#endif  // PERTURBKIT_PIPELINE_STAGES_H_
