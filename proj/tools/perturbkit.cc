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

// Command-line front end: one verb per pipeline stage plus `evaluate`.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/corpus/corpus.h"
#include "perturbkit/oracle/grader.h"
#include "perturbkit/pipeline/config.h"
#include "perturbkit/pipeline/stages.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace perturbkit;

namespace {

struct GlobalFlags {
  std::string corpus;
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<size_t> workers;
  std::string techniques;
  std::string backend;
  std::string out;
};

pipeline::RunConfig BuildConfig(const GlobalFlags& g, bool need_config) {
  pipeline::RunConfig cfg;
  if (!g.config.empty()) {
    cfg = pipeline::LoadRunConfig(g.config);
  } else if (need_config) {
    throw pipeline::ConfigError("--config is required for this command");
  }
  if (!g.corpus.empty()) cfg.corpus_root = fs::absolute(g.corpus);
  if (g.seed) cfg.seed = *g.seed;
  if (g.workers) cfg.workers = *g.workers;
  if (!g.techniques.empty()) cfg.techniques = pipeline::ParseTechniqueList(g.techniques);
  if (!g.backend.empty()) cfg.backend = g.backend;
  if (!g.out.empty()) cfg.output_dir = fs::absolute(g.out);
  if (need_config) cfg.Validate();
  return cfg;
}

int Finish(const std::string& stage, const pipeline::StageResult& r) {
  std::printf("%s: %zu failure(s)\n", stage.c_str(), r.failures.size());
  for (const auto& f : r.failures) {
    std::printf("  %s %s %s\n", f.problem_id.c_str(), f.variant_digest.c_str(),
                f.message.c_str());
  }
  return r.failures.empty() ? 0 : 1;
}

int Validate(const GlobalFlags& g, bool references) {
  const auto cfg = BuildConfig(g, false);
  if (cfg.corpus_root.empty()) throw pipeline::ConfigError("--corpus or --config is required");
  const corpus::Corpus corpus = corpus::LoadCorpus(cfg.corpus_root);
  std::printf("corpus %s: %zu problem(s) valid\n", cfg.corpus_root.c_str(), corpus.size());
  if (!references) return 0;
  int bad = 0;
  for (const auto& p : corpus.problems()) {
    if (!p.reference_solution_path) {
      std::printf("  %s: no reference solution\n", p.id.c_str());
      continue;
    }
    oracle::SandboxOptions opts;
    opts.python = cfg.python;
    const auto r = oracle::Grade(p.id, ReadFile(*p.reference_solution_path), p.oracle, opts);
    std::printf("  %s: %s %d/%d\n", p.id.c_str(), std::string(oracle::ToString(r.outcome)).c_str(),
                r.passed, r.total);
    if (r.score != 100) ++bad;
  }
  return bad == 0 ? 0 : 1;
}

int GradeOne(const GlobalFlags& g, const std::string& problem_id, const std::string& solution) {
  const auto cfg = BuildConfig(g, false);
  if (cfg.corpus_root.empty()) throw pipeline::ConfigError("--corpus or --config is required");
  const corpus::Corpus corpus = corpus::LoadCorpus(cfg.corpus_root);
  const corpus::Problem* p = corpus.Find(problem_id);
  if (!p) throw pipeline::ConfigError("no problem '" + problem_id + "' in the corpus");
  oracle::SandboxOptions opts;
  opts.python = cfg.python;
  opts.timeout_seconds = cfg.grade_timeout_seconds;
  const auto r = oracle::Grade(p->id, ReadFile(solution), p->oracle, opts);
  std::cout << oracle::ToJson(r).dump(2) << "\n";
  return 0;
}

int ReportFromRecords(const GlobalFlags& g, const std::string& records_path) {
  pipeline::ReportInputs in;
  in.records = pipeline::RecordsFromJsonl(ReadFile(records_path));
  const json report = pipeline::BuildReport(in);
  std::cout << pipeline::RenderReportText(in);
  if (!g.out.empty()) {
    const fs::path out = g.out;
    WriteFileOnce(out / "report.json", report.dump(2) + "\n");
    WriteFileOnce(out / "report.txt", pipeline::RenderReportText(in));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt perturbation toolkit for code-generation robustness studies"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--corpus", g.corpus, "Corpus root directory");
  app.add_option("--config", g.config, "Run configuration JSON");
  app.add_option("--seed", g.seed, "Override the run seed");
  app.add_option("--workers", g.workers, "Override the worker count")->check(CLI::PositiveNumber);
  app.add_option("--techniques", g.techniques, "Comma-separated technique filter");
  app.add_option("--backend", g.backend, "Backend name from the config");
  app.add_option("--out", g.out, "Run output directory");

  bool references = false;
  auto* validate = app.add_subcommand("validate", "Check the corpus manifest");
  validate->add_flag("--references", references, "Also grade reference solutions");
  auto* importance = app.add_subcommand("importance", "Compute token attributions");
  auto* perturb = app.add_subcommand("perturb", "Generate prompt variants");
  auto* generate = app.add_subcommand("generate", "Request solutions from the backend");
  std::string problem_id, solution;
  auto* grade = app.add_subcommand("grade", "Grade stored solutions or a single file");
  grade->add_option("--problem", problem_id, "Grade one solution for this problem");
  grade->add_option("--solution", solution, "Solution file for --problem")->needs(
      grade->get_option("--problem"));
  auto* evaluate = app.add_subcommand("evaluate", "Run every stage");
  std::string records;
  auto* report = app.add_subcommand("report", "Summarize stored records");
  report->add_option("--records", records, "Summarize this records file only");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return Validate(g, references);
    if (grade->parsed() && !problem_id.empty()) {
      if (solution.empty()) throw pipeline::ConfigError("--solution is required with --problem");
      return GradeOne(g, problem_id, solution);
    }
    if (report->parsed() && !records.empty()) return ReportFromRecords(g, records);

    const auto cfg = BuildConfig(g, true);
    if (evaluate->parsed()) {
      const json r = pipeline::Evaluate(cfg);
      std::cout << ReadFile(pipeline::RunPaths{cfg.output_dir}.ReportText());
      return r.at("failure_count").get<size_t>() == 0 ? 0 : 1;
    }
    const corpus::Corpus corpus = corpus::LoadCorpus(cfg.corpus_root);
    if (importance->parsed()) return Finish("importance", pipeline::RunImportance(cfg, corpus));
    if (perturb->parsed()) return Finish("perturb", pipeline::RunPerturb(cfg, corpus));
    if (generate->parsed()) return Finish("generate", pipeline::RunGenerate(cfg, corpus));
    if (grade->parsed()) return Finish("grade", pipeline::RunGrade(cfg, corpus));
    if (report->parsed()) {
      const json r = pipeline::RunReport(cfg, corpus);
      std::cout << ReadFile(pipeline::RunPaths{cfg.output_dir}.ReportText());
      return r.at("failure_count").get<size_t>() == 0 ? 0 : 1;
    }
  } catch (const pipeline::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
