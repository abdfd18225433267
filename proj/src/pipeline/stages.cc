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

#include "perturbkit/pipeline/stages.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/parallel.h"
#include "perturbkit/common/rng.h"
#include "perturbkit/genclient/codegen.h"
#include "perturbkit/importance/sentences.h"
#include "perturbkit/importance/shapley.h"
#include "perturbkit/metrics/edit_distance.h"
#include "perturbkit/oracle/grader.h"
#include "perturbkit/oracle/restore.h"
#include "perturbkit/perturb/homoglyph.h"
#include "perturbkit/perturb/perturb.h"
#include "perturbkit/perturb/text_provider.h"

namespace perturbkit::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Model output is not guaranteed to be valid UTF-8.
std::string Dump(const json& j, int indent = -1) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

void WriteJson(const fs::path& path, const json& j) { WriteFileOnce(path, Dump(j, 2) + "\n"); }

template <typename Fn>
void ForEachJsonLine(std::string_view text, Fn&& fn) {
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    fn(json::parse(line));
  }
}

void WriteStageFailures(const RunPaths& paths, const std::string& stage,
                        const std::vector<Failure>& failures) {
  json arr = json::array();
  for (const auto& f : failures) arr.push_back(ToJson(f));
  WriteJson(paths.StageFailures(stage), arr);
}

// Stands in when no provider is configured: every request fails, which the
// synonym and rephrase operators turn into warnings.
class NoProvider : public perturb::TextProvider {
 public:
  std::vector<std::string> Synonyms(std::string_view, std::string_view) override {
    throw perturb::ProviderError("no text provider configured");
  }
  std::string Rephrase(std::string_view) override {
    throw perturb::ProviderError("no text provider configured");
  }
  std::string id() const override { return "none"; }
};

std::unique_ptr<perturb::TextProvider> MakeProvider(const RunConfig& cfg) {
  if (cfg.provider.is_null() || cfg.provider.empty()) return std::make_unique<NoProvider>();
  return perturb::MakeTextProvider(cfg.provider, cfg.config_dir);
}

perturb::PerturbConfig EffectivePerturbConfig(const RunConfig& cfg) {
  perturb::PerturbConfig p = cfg.perturb;
  p.seed = cfg.seed;
  return p;
}

std::vector<std::string> TechniqueNames(const RunConfig& cfg) {
  std::vector<std::string> out;
  for (perturb::Technique t : perturb::kAllTechniques) {
    if (cfg.techniques.empty() ||
        std::find(cfg.techniques.begin(), cfg.techniques.end(), t) != cfg.techniques.end()) {
      out.emplace_back(perturb::ToString(t));
    }
  }
  return out;
}

std::vector<std::string> AllTechniqueNames() {
  std::vector<std::string> out;
  for (perturb::Technique t : perturb::kAllTechniques) out.emplace_back(perturb::ToString(t));
  return out;
}

std::optional<std::vector<perturb::PromptVariant>> LoadVariants(const RunPaths& paths,
                                                                const std::string& pid) {
  if (!fs::exists(paths.Variants(pid))) return std::nullopt;
  return perturb::VariantsFromJsonl(ReadFile(paths.Variants(pid)));
}

std::optional<std::vector<genclient::Solution>> LoadSolutions(const RunPaths& paths,
                                                              const std::string& pid) {
  if (!fs::exists(paths.Generations(pid))) return std::nullopt;
  std::vector<genclient::Solution> out;
  ForEachJsonLine(ReadFile(paths.Generations(pid)),
                  [&](const json& j) { out.push_back(genclient::SolutionFromJson(j)); });
  return out;
}

struct StoredGrade {
  std::string variant_digest;
  int candidate_index = 0;
  bool restored = false;
  oracle::GradeResult grade;
};

std::optional<std::vector<StoredGrade>> LoadGrades(const RunPaths& paths,
                                                   const std::string& pid) {
  if (!fs::exists(paths.Grades(pid))) return std::nullopt;
  std::vector<StoredGrade> out;
  ForEachJsonLine(ReadFile(paths.Grades(pid)), [&](const json& j) {
    out.push_back({j.at("variant_digest").get<std::string>(), j.at("candidate_index").get<int>(),
                   j.at("restored").get<bool>(), oracle::GradeResultFromJson(j.at("grade"))});
  });
  return out;
}

// Name maps of random_replace variants, by variant digest.
std::map<std::string, perturb::NameMap> NameMaps(
    const std::vector<perturb::PromptVariant>& variants) {
  std::map<std::string, perturb::NameMap> out;
  for (const auto& v : variants) {
    if (v.name_map) out.emplace(v.digest(), *v.name_map);
  }
  return out;
}

std::string CodeToGrade(const genclient::Solution& s,
                        const std::map<std::string, perturb::NameMap>& maps, bool* restored) {
  auto it = maps.find(s.variant_digest);
  *restored = it != maps.end();
  return *restored ? oracle::RestoreNames(s.code, it->second) : s.code;
}

std::set<std::string> PreservedNames(const corpus::Problem& p) {
  std::set<std::string> out;
  for (const auto& id : p.identifiers) {
    out.insert(id.name);
    if (id.role == corpus::IdentifierRole::kFile) {
      std::string stem = fs::path(id.name).stem().string();
      if (!stem.empty()) out.insert(stem);
    }
  }
  return out;
}

json RunMetadata(const RunConfig& cfg) {
  const auto& b = cfg.selected_backend();
  json techniques = json::array();
  for (const auto& t : TechniqueNames(cfg)) techniques.push_back(t);
  return {{"seed", cfg.seed},
          {"backend",
           {{"name", b.name},
            {"kind", genclient::ToString(b.kind)},
            {"model_id", b.model_id},
            {"temperature", b.params.temperature},
            {"max_tokens", b.params.max_tokens}}},
          {"scorer_kind", importance::ToString(cfg.scorer.kind)},
          {"provider_kind", cfg.provider.value("kind", "none")},
          {"techniques", techniques},
          {"candidates_per_prompt", cfg.candidates_per_prompt},
          {"perturb", perturb::ToJson(EffectivePerturbConfig(cfg))},
          {"importance", {{"samples", cfg.importance_samples},
                          {"exhaustive_limit", cfg.exhaustive_limit}}},
          {"nonzero_base_only", cfg.nonzero_base_only},
          {"variety_threshold", cfg.variety_threshold}};
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::milliseconds>(
      now.time_since_epoch()).count();
  return std::to_string(secs);
}

}  // namespace

json ToJson(const Failure& f) {
  return {{"stage", f.stage},
          {"problem_id", f.problem_id},
          {"variant_digest", f.variant_digest},
          {"message", f.message}};
}

Failure FailureFromJson(const json& j) {
  return {j.at("stage").get<std::string>(), j.at("problem_id").get<std::string>(),
          j.value("variant_digest", ""), j.value("message", "")};
}

fs::path RunPaths::Importance(const std::string& pid) const {
  return root / "importance" / (pid + ".json");
}
fs::path RunPaths::Variants(const std::string& pid) const {
  return root / "variants" / (pid + ".jsonl");
}
fs::path RunPaths::Warnings(const std::string& pid) const {
  return root / "variants" / (pid + ".warnings.json");
}
fs::path RunPaths::Generations(const std::string& pid) const {
  return root / "generations" / (pid + ".jsonl");
}
fs::path RunPaths::Grades(const std::string& pid) const {
  return root / "grades" / (pid + ".jsonl");
}
fs::path RunPaths::StageFailures(const std::string& stage) const {
  return root / "failures" / (stage + ".json");
}

StageResult RunImportance(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  const auto scorer = importance::MakeScorer(cfg.scorer);
  StageResult result;
  for (const auto& problem : corpus.problems()) {
    importance::AttributionConfig ac;
    ac.samples = cfg.importance_samples;
    ac.seed = DeriveSeed(cfg.seed, "importance/" + problem.id);
    ac.exhaustive_limit = cfg.exhaustive_limit;
    ac.workers = cfg.workers;
    try {
      const auto attr = importance::ShapleyAttributions(problem.prompt_text, *scorer, ac);
      const auto ranking = importance::RankSentences(problem.prompt_text, attr);
      WriteJson(paths.Importance(problem.id),
                {{"attribution", importance::ToJson(attr)},
                 {"ranking", importance::ToJson(ranking)}});
    } catch (const Error& e) {
      result.failures.push_back({"importance", problem.id, "", e.what()});
    }
  }
  WriteStageFailures(paths, "importance", result.failures);
  return result;
}

StageResult RunPerturb(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  const auto provider = MakeProvider(cfg);
  const perturb::HomoglyphTable table =
      cfg.homoglyphs ? perturb::HomoglyphTable::Load(*cfg.homoglyphs)
                     : perturb::HomoglyphTable::Default();
  const auto pcfg = EffectivePerturbConfig(cfg);
  StageResult result;
  for (const auto& problem : corpus.problems()) {
    try {
      if (!fs::exists(paths.Importance(problem.id))) {
        throw Error("importance output missing; run the importance stage first");
      }
      const json imp = json::parse(ReadFile(paths.Importance(problem.id)));
      const auto attr = importance::AttributionFromJson(imp.at("attribution"));
      const auto ranking = importance::RankingFromJson(imp.at("ranking"));
      const auto set = perturb::GenerateAll(problem, attr, ranking, *provider, table, pcfg,
                                            cfg.techniques);
      WriteFileOnce(paths.Variants(problem.id), perturb::VariantsToJsonl(set.variants));
      json warnings = json::array();
      for (const auto& w : set.warnings) {
        warnings.push_back({{"technique", perturb::ToString(w.technique)},
                            {"message", w.message}});
      }
      WriteJson(paths.Warnings(problem.id), warnings);
    } catch (const Error& e) {
      result.failures.push_back({"perturb", problem.id, "", e.what()});
    } catch (const json::exception& e) {
      result.failures.push_back({"perturb", problem.id, "", e.what()});
    }
  }
  WriteStageFailures(paths, "perturb", result.failures);
  return result;
}

StageResult RunGenerate(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  const auto backend = genclient::MakeBackend(cfg.selected_backend());
  StageResult result;

  struct Item {
    size_t problem;
    std::string digest;
    std::string text;
  };
  std::vector<Item> items;
  std::vector<std::vector<Failure>> problem_failures(corpus.size());
  for (size_t p = 0; p < corpus.size(); ++p) {
    const auto& problem = corpus.problems()[p];
    std::set<std::string> seen;
    const std::string base = Sha256Hex(problem.prompt_text);
    seen.insert(base);
    items.push_back({p, base, problem.prompt_text});
    try {
      const auto variants = LoadVariants(paths, problem.id);
      if (!variants) throw Error("variants missing; run the perturb stage first");
      for (const auto& v : *variants) {
        if (seen.insert(v.digest()).second) items.push_back({p, v.digest(), v.text});
      }
    } catch (const std::exception& e) {
      problem_failures[p].push_back({"generate", problem.id, "", e.what()});
    }
  }

  std::vector<std::vector<genclient::Solution>> solutions(items.size());
  std::vector<std::optional<std::string>> errors(items.size());
  ParallelFor(items.size(), cfg.workers, [&](size_t i) {
    const Item& item = items[i];
    try {
      solutions[i] = genclient::Generate(*backend, corpus.problems()[item.problem].id,
                                         item.digest, genclient::BuildCodegenPrompt(item.text),
                                         cfg.candidates_per_prompt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<std::string> files(corpus.size());
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& pid = corpus.problems()[items[i].problem].id;
    if (errors[i]) {
      problem_failures[items[i].problem].push_back({"generate", pid, items[i].digest, *errors[i]});
      continue;
    }
    for (const auto& s : solutions[i]) files[items[i].problem] += Dump(genclient::ToJson(s)) + "\n";
  }
  for (size_t p = 0; p < corpus.size(); ++p) {
    WriteFileOnce(paths.Generations(corpus.problems()[p].id), files[p]);
    result.failures.insert(result.failures.end(), problem_failures[p].begin(),
                           problem_failures[p].end());
  }
  WriteStageFailures(paths, "generate", result.failures);
  return result;
}

StageResult RunGrade(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  StageResult result;
  oracle::SandboxOptions sandbox;
  sandbox.timeout_seconds = cfg.grade_timeout_seconds;
  sandbox.python = cfg.python;

  struct Job {
    size_t problem;
    std::string code;
  };
  struct Entry {
    std::string variant_digest;
    int candidate_index;
    bool restored;
    size_t job;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<Entry>> entries(corpus.size());
  std::vector<bool> loaded(corpus.size(), false);
  std::vector<std::vector<Failure>> problem_failures(corpus.size());

  for (size_t p = 0; p < corpus.size(); ++p) {
    const auto& problem = corpus.problems()[p];
    try {
      const auto solutions = LoadSolutions(paths, problem.id);
      if (!solutions) throw Error("generations missing; run the generate stage first");
      const auto variants = LoadVariants(paths, problem.id);
      const auto maps = variants ? NameMaps(*variants) : std::map<std::string, perturb::NameMap>{};
      std::map<std::string, size_t> job_of_code;
      for (const auto& s : *solutions) {
        bool restored = false;
        std::string code = CodeToGrade(s, maps, &restored);
        auto [it, inserted] = job_of_code.emplace(Sha256Hex(code), jobs.size());
        if (inserted) jobs.push_back({p, std::move(code)});
        entries[p].push_back({s.variant_digest, s.candidate_index, restored, it->second});
      }
      loaded[p] = true;
    } catch (const std::exception& e) {
      problem_failures[p].push_back({"grade", problem.id, "", e.what()});
    }
  }

  std::vector<std::optional<oracle::GradeResult>> grades(jobs.size());
  std::vector<std::string> errors(jobs.size());
  ParallelFor(jobs.size(), cfg.workers, [&](size_t i) {
    const auto& problem = corpus.problems()[jobs[i].problem];
    try {
      grades[i] = oracle::Grade(problem.id, jobs[i].code, problem.oracle, sandbox);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  for (size_t p = 0; p < corpus.size(); ++p) {
    const auto& pid = corpus.problems()[p].id;
    if (loaded[p]) {
      std::string out;
      std::set<std::string> failed_variants;
      for (const auto& e : entries[p]) {
        if (!grades[e.job]) {
          if (failed_variants.insert(e.variant_digest).second) {
            problem_failures[p].push_back({"grade", pid, e.variant_digest, errors[e.job]});
          }
          continue;
        }
        out += Dump({{"variant_digest", e.variant_digest},
                     {"candidate_index", e.candidate_index},
                     {"restored", e.restored},
                     {"grade", oracle::ToJson(*grades[e.job])}}) +
               "\n";
      }
      WriteFileOnce(paths.Grades(pid), out);
    }
    result.failures.insert(result.failures.end(), problem_failures[p].begin(),
                           problem_failures[p].end());
  }
  WriteStageFailures(paths, "grade", result.failures);
  return result;
}

Scored ScoreRun(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  Scored out;
  for (const auto& problem : corpus.problems()) {
    BaseScore base{problem.id, 0, false};
    const auto grades = LoadGrades(paths, problem.id);
    const auto variants = LoadVariants(paths, problem.id);
    std::map<std::string, double> best;
    if (grades) {
      for (const auto& g : *grades) {
        auto [it, inserted] = best.emplace(g.variant_digest, g.grade.score);
        if (!inserted) it->second = std::max(it->second, g.grade.score);
      }
    }
    const auto base_it = best.find(Sha256Hex(problem.prompt_text));
    if (base_it != best.end()) {
      base.available = true;
      base.score = base_it->second;
    }
    out.base_scores.push_back(base);

    if (base.available && variants && (base.score > 0 || !cfg.nonzero_base_only)) {
      for (const auto& v : *variants) {
        const auto it = best.find(v.digest());
        if (it == best.end()) continue;
        const double change = metrics::ChangePct(problem.prompt_text, v.text);
        const std::string technique(perturb::ToString(v.technique));
        if (base.score > 0) {
          out.records.push_back(
              metrics::MakeRecord(problem.id, technique, v.digest(), base.score, it->second, change));
        } else {
          metrics::EfficacyRecord r;
          r.problem_id = problem.id;
          r.technique = technique;
          r.variant_digest = v.digest();
          r.s_prtrb = it->second;
          r.change_pct = change;
          out.records.push_back(r);
        }
      }
    }

    const auto solutions = LoadSolutions(paths, problem.id);
    if (!solutions) continue;
    const auto maps = variants ? NameMaps(*variants) : std::map<std::string, perturb::NameMap>{};
    std::vector<std::string> codes;
    for (const auto& s : *solutions) {
      if (s.refusal_flag || s.code.empty()) continue;
      bool restored = false;
      codes.push_back(CodeToGrade(s, maps, &restored));
    }
    if (codes.empty()) continue;
    std::map<std::string, size_t> slot_of;
    std::vector<std::string> distinct;
    for (const auto& c : codes) {
      if (slot_of.emplace(Sha256Hex(c), distinct.size()).second) distinct.push_back(c);
    }
    const auto preserved = PreservedNames(problem);
    const auto normalized = metrics::NormalizeAll(distinct, preserved, cfg.python);
    std::vector<metrics::NormalizedCode> all;
    all.reserve(codes.size());
    for (const auto& c : codes) all.push_back(normalized[slot_of.at(Sha256Hex(c))]);
    out.variety.push_back(metrics::UniqueVariants(problem.id, all, cfg.variety_threshold));
  }
  return out;
}

std::string RecordsToJsonl(std::span<const metrics::EfficacyRecord> records) {
  std::string out;
  for (const auto& r : records) out += Dump(metrics::ToJson(r)) + "\n";
  return out;
}

std::vector<metrics::EfficacyRecord> RecordsFromJsonl(std::string_view jsonl) {
  std::vector<metrics::EfficacyRecord> out;
  ForEachJsonLine(jsonl, [&](const json& j) { out.push_back(metrics::RecordFromJson(j)); });
  return out;
}

json BuildReport(const ReportInputs& in) {
  const auto summary = metrics::Summarize(in.records, AllTechniqueNames());
  json problems = json::array();
  json zero_base = json::array();
  json unavailable = json::array();
  for (const auto& b : in.base_scores) {
    problems.push_back({{"problem_id", b.problem_id},
                        {"base_score", b.available ? json(b.score) : json(nullptr)}});
    if (!b.available) {
      unavailable.push_back(b.problem_id);
    } else if (b.score == 0) {
      zero_base.push_back(b.problem_id);
    }
  }
  json variety = json::array();
  double unique_sum = 0;
  for (const auto& v : in.variety) {
    variety.push_back(metrics::ToJson(v));
    unique_sum += static_cast<double>(v.unique_count);
  }
  return {{"run", in.run},
          {"problems", problems},
          {"zero_base_problems", zero_base},
          {"unavailable_problems", unavailable},
          {"record_count", in.records.size()},
          {"summary", metrics::ToJson(summary)},
          {"variety", variety},
          {"mean_unique_variants",
           in.variety.empty() ? json(nullptr)
                              : json(unique_sum / static_cast<double>(in.variety.size()))},
          {"failure_count", in.failures.size()}};
}

std::string RenderReportText(const ReportInputs& in) {
  const auto summary = metrics::Summarize(in.records, AllTechniqueNames());
  std::string out;
  if (in.run.contains("seed")) {
    out += "seed " + in.run.at("seed").dump() + ", backend " +
           in.run.at("backend").value("name", "?") + " (" +
           in.run.at("backend").value("model_id", "?") + ")\n\n";
  }
  if (!in.base_scores.empty()) {
    out += "base scores\n";
    for (const auto& b : in.base_scores) {
      out += "  " + b.problem_id + ": " + (b.available ? Fixed(b.score) : "unavailable") + "\n";
    }
    out += "\n";
  }
  out += metrics::RenderEfficacyTable(summary) + "\n";
  out += metrics::RenderChangeTable(summary) + "\n";
  if (!in.variety.empty()) {
    out += "solution variety\n";
    for (const auto& v : in.variety) {
      out += "  " + v.problem_id + ": " + std::to_string(v.unique_count) + " unique of " +
             std::to_string(v.solution_count) + "\n";
    }
    out += "\n";
  }
  out += "failures: " + std::to_string(in.failures.size()) + "\n";
  return out;
}

std::vector<Failure> CollectFailures(const RunPaths& paths) {
  std::vector<Failure> out;
  for (const char* stage : {"importance", "perturb", "generate", "grade"}) {
    const auto file = paths.StageFailures(stage);
    if (!fs::exists(file)) continue;
    for (const auto& f : json::parse(ReadFile(file))) out.push_back(FailureFromJson(f));
  }
  return out;
}

json RunReport(const RunConfig& cfg, const corpus::Corpus& corpus) {
  const RunPaths paths{cfg.output_dir};
  ReportInputs in;
  if (fs::exists(paths.Records())) {
    in.records = RecordsFromJsonl(ReadFile(paths.Records()));
    if (fs::exists(paths.BaseScores())) {
      for (const auto& b : json::parse(ReadFile(paths.BaseScores()))) {
        BaseScore s{b.at("problem_id").get<std::string>(), 0, !b.at("base_score").is_null()};
        if (s.available) s.score = b.at("base_score").get<double>();
        in.base_scores.push_back(s);
      }
    }
    if (fs::exists(paths.Variety())) {
      ForEachJsonLine(ReadFile(paths.Variety()),
                      [&](const json& j) { in.variety.push_back(metrics::VarietyFromJson(j)); });
    }
  } else {
    Scored scored = ScoreRun(cfg, corpus);
    in.records = std::move(scored.records);
    in.base_scores = std::move(scored.base_scores);
    in.variety = std::move(scored.variety);
    json bases = json::array();
    for (const auto& b : in.base_scores) {
      bases.push_back({{"problem_id", b.problem_id},
                       {"base_score", b.available ? json(b.score) : json(nullptr)}});
    }
    std::string variety;
    for (const auto& v : in.variety) variety += Dump(metrics::ToJson(v)) + "\n";
    WriteFileOnce(paths.Records(), RecordsToJsonl(in.records));
    WriteJson(paths.BaseScores(), bases);
    WriteFileOnce(paths.Variety(), variety);
  }
  in.failures = CollectFailures(paths);
  in.run = RunMetadata(cfg);

  const json report = BuildReport(in);
  json failures = json::array();
  for (const auto& f : in.failures) failures.push_back(ToJson(f));
  WriteJson(paths.Report(), report);
  WriteFileOnce(paths.ReportText(), RenderReportText(in));
  WriteJson(paths.FailureManifest(), failures);
  return report;
}

json Evaluate(const RunConfig& cfg) {
  cfg.Validate();
  const std::string started = Timestamp();
  const corpus::Corpus corpus = corpus::LoadCorpus(cfg.corpus_root);
  RunImportance(cfg, corpus);
  RunPerturb(cfg, corpus);
  RunGenerate(cfg, corpus);
  RunGrade(cfg, corpus);
  json report = RunReport(cfg, corpus);
  const RunPaths paths{cfg.output_dir};
  WriteJson(paths.MetaDir() / (started + "-" + std::to_string(getpid()) + ".json"),
            {{"started_ms", started},
             {"finished_ms", Timestamp()},
             {"workers", cfg.workers},
             {"output_dir", cfg.output_dir.string()},
             {"corpus_root", cfg.corpus_root.string()}});
  return report;
}

}  // namespace perturbkit::pipeline
