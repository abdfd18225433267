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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/digest.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/rng.h"
#include "perturbkit/common/text.h"
#include "perturbkit/common/utf8.h"
#include "perturbkit/corpus/corpus.h"
#include "perturbkit/genclient/codegen.h"
#include "perturbkit/importance/scorer.h"
#include "perturbkit/importance/sentences.h"
#include "perturbkit/importance/shapley.h"
#include "perturbkit/metrics/edit_distance.h"
#include "perturbkit/metrics/efficacy.h"
#include "perturbkit/metrics/similarity.h"
#include "perturbkit/oracle/grader.h"
#include "perturbkit/oracle/restore.h"
#include "perturbkit/perturb/homoglyph.h"
#include "perturbkit/perturb/perturb.h"
#include "perturbkit/perturb/text_provider.h"
#include "perturbkit/pipeline/config.h"
#include "perturbkit/pipeline/stages.h"
#include "test_util.h"

namespace perturbkit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::FixtureDir;

// A failed expectation; the message becomes the FAIL detail.
struct CheckFailed {
  std::string message;
};

void Expect(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed{what};
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const corpus::Corpus& Fixtures() {
  static const corpus::Corpus c = corpus::LoadCorpus(FixtureDir() / "corpus");
  return c;
}

std::string ShapleyCorrectness() {
  const json cases = json::parse(ReadFile(FixtureDir() / "shapley_cases.json")).at("cases");
  double worst_ratio = 0;
  for (const json& c : cases) {
    const std::string name = c.at("name");
    const std::string prompt = c.at("prompt");
    const auto scorer = importance::SyntheticScorer::FromJson(c.at("scorer"));
    const auto exact = importance::ShapleyAttributions(prompt, *scorer, {});
    const size_t n = exact.tokens.size();
    Expect(n <= 12 && exact.estimator == importance::Estimator::kExact, name + ": not exact");
    const double total = std::accumulate(exact.values.begin(), exact.values.end(), 0.0);
    Expect(std::abs(total - (exact.full_score - exact.empty_score)) < 1e-9,
           name + ": efficiency violated");
    for (const auto& pair : c.at("symmetric")) {
      Expect(std::abs(exact.values[pair[0].get<size_t>()] - exact.values[pair[1].get<size_t>()]) <
                 1e-9,
             name + ": symmetry violated");
    }
    for (const auto& i : c.at("null")) {
      Expect(std::abs(exact.values[i.get<size_t>()]) < 1e-9, name + ": null player violated");
    }

    double lo = INFINITY, hi = -INFINITY;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<bool> in(n);
      for (size_t i = 0; i < n; ++i) in[i] = mask >> i & 1;
      const double w = scorer->Score(importance::CoalitionText(prompt, exact.tokens, in));
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    importance::AttributionConfig mc;
    mc.exhaustive_limit = 0;
    mc.seed = 12345;
    const auto approx = importance::ShapleyAttributions(prompt, *scorer, mc);
    Expect(approx.samples == 200, name + ": expected 200 permutations");
    for (size_t i = 0; i < n; ++i) {
      const double ratio = std::abs(approx.values[i] - exact.values[i]) / (hi - lo);
      worst_ratio = std::max(worst_ratio, ratio);
      Expect(ratio <= 0.05, name + ": MC error " + Num(100 * ratio) + "% of spread");
    }
  }

  double slowest = 0;
  const auto weights = importance::SyntheticScorer::FromJson(
      json::parse(ReadFile(FixtureDir() / "weights.json")));
  for (const auto& p : Fixtures().problems()) {
    const auto start = std::chrono::steady_clock::now();
    importance::ShapleyAttributions(p.prompt_text, *weights, {});
    slowest = std::max(slowest, std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count());
  }
  Expect(slowest < 5, "slowest prompt took " + Num(slowest) + " s");
  return std::to_string(cases.size()) + " cases; worst MC error " + Num(100 * worst_ratio) +
         "% of spread; slowest prompt " + Num(slowest) + " s";
}

std::string EfficacyFidelity() {
  Expect(metrics::Efficacy(100, 0) == 100, "efficacy(100,0)");
  Expect(metrics::Efficacy(50, 75) == 0, "efficacy(50,75)");
  Expect(metrics::Efficacy(80, 60) == 25, "efficacy(80,60)");
  const double combined = metrics::CombinedEfficacy({{"p1", {10, 40}}, {"p2", {0, 0}}});
  Expect(combined == 20, "combined efficacy " + Num(combined));
  bool rejected = false;
  try {
    metrics::Efficacy(0, 0);
  } catch (const DomainError&) {
    rejected = true;
  }
  Expect(rejected, "zero base accepted");
  return "100, 0, 25; combined 20; zero base rejected";
}

std::string SentencesPrompt(size_t n) {
  std::string s;
  for (size_t i = 0; i < n; ++i) s += (i ? " " : "") + std::string("Sentence ") + std::to_string(i) + ".";
  return s;
}

std::string VariantCountLaw() {
  const corpus::Problem& p = *Fixtures().Find("jaccard");
  const pipeline::RunConfig cfg = pipeline::LoadRunConfig(FixtureDir() / "run_replay.json");
  const auto scorer = importance::MakeScorer(cfg.scorer);
  importance::AttributionConfig acfg;
  acfg.seed = DeriveSeed(cfg.seed, "importance/" + p.id);
  const auto attr = importance::ShapleyAttributions(p.prompt_text, *scorer, acfg);
  const auto ranking = importance::RankSentences(p.prompt_text, attr);
  Expect(ranking.sentences.size() == 6, "fixture has " + std::to_string(ranking.sentences.size()) +
                                            " sentences");
  auto provider = perturb::MakeTextProvider(cfg.provider, cfg.config_dir);
  perturb::PerturbConfig pcfg = cfg.perturb;
  pcfg.seed = cfg.seed;
  const auto set = perturb::GenerateAll(p, attr, ranking, *provider,
                                        perturb::HomoglyphTable::Default(), pcfg);
  std::map<perturb::Technique, int> counts;
  for (const auto& v : set.variants) ++counts[v.technique];
  std::vector<int> got;
  std::string shown;
  for (perturb::Technique t : perturb::kAllTechniques) {
    got.push_back(counts[t]);
    shown += (shown.empty() ? "" : ",") + std::to_string(counts[t]);
  }
  Expect(got == std::vector<int>{1, 1, 1, 1, 1, 10, 10, 5, 3, 1}, "counts {" + shown + "}");

  for (size_t n : {1, 2, 3, 6, 9}) {
    const size_t w = std::max<size_t>(1, n / 3);
    const size_t k = perturb::SentenceRemove(SentencesPrompt(n), {}).size();
    Expect(k == n - w + 1, "sentence_remove n=" + std::to_string(n) + " gave " +
                               std::to_string(k));
  }
  return "counts {" + shown + "}; sentence_remove n-w+1 for n in {1,2,3,6,9}";
}

std::string HomoglyphFidelity() {
  const auto table = perturb::HomoglyphTable::Default();
  Expect(table.Lookup(U'a') == U'à', "a");
  Expect(table.Lookup(U'c') == U'ċ', "c");
  Expect(table.Lookup(U'y') == U'ý', "y");
  std::vector<std::string> words;
  for (const auto& p : Fixtures().problems()) {
    for (const auto& t : importance::Tokenize(p.prompt_text)) words.push_back(t.text);
  }
  SeededRng rng(31337);
  static const char* kGlue[] = {" ", ", ", ". ", "\n", " (", ") "};
  for (int i = 0; i < 100; ++i) {
    std::string prompt;
    const size_t len = 1 + rng.Uniform(60);
    for (size_t w = 0; w < len; ++w) prompt += words[rng.Uniform(words.size())] + kGlue[rng.Uniform(6)];
    const auto v = perturb::UnicodeSubstitute(prompt, perturb::UnicodeScope::kWholePrompt, {}, table);
    Expect(CodepointCount(v.text) == CodepointCount(prompt), "codepoint count changed");
  }
  return "a->à c->ċ y->ý; 100 random prompts keep codepoint count";
}

std::string NameRoundTrips() {
  int checked = 0;
  for (const auto& p : Fixtures().problems()) {
    if (p.identifiers.empty() || !p.reference_solution_path) continue;
    const std::string solution = ReadFile(*p.reference_solution_path);
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto v = perturb::RandomReplace(p.prompt_text, p.identifiers, seed);
      Expect(oracle::RestoreNames(v.text, *v.name_map) == p.prompt_text,
             p.id + ": prompt not restored");
      const std::string renamed = SubstituteLongestFirst(solution, *v.name_map);
      Expect(renamed != solution, p.id + ": solution not renamed");
      Expect(oracle::RestoreNames(renamed, *v.name_map) == solution,
             p.id + ": solution not restored");
      ++checked;
    }
  }
  Expect(checked > 0, "no fixture problems with identifiers");
  return std::to_string(checked) + " prompt/solution round trips byte-exact";
}

std::string OracleGrading() {
  for (const auto& p : Fixtures().problems()) {
    const auto r = oracle::Grade(p.id, ReadFile(*p.reference_solution_path), p.oracle);
    Expect(r.score == 100, p.id + " reference scored " + Num(r.score));
  }
  const corpus::Problem& j = *Fixtures().Find("jaccard");
  const std::string sabotaged = ReadFile(FixtureDir() / "solutions/jaccard_sabotaged.py");
  const auto s1 = oracle::Grade("jaccard", sabotaged, j.oracle);
  Expect(s1.score == 70, "sabotaged scored " + Num(s1.score));
  oracle::SandboxOptions opts;
  opts.timeout_seconds = 3;
  const auto loop =
      oracle::Grade("jaccard", ReadFile(FixtureDir() / "solutions/jaccard_infinite.py"), j.oracle,
                    opts);
  Expect(loop.outcome == oracle::Outcome::kTimeout && loop.score == 0, "infinite loop not a timeout");
  for (int i = 0; i < 2; ++i) {
    Expect(oracle::Grade("jaccard", sabotaged, j.oracle).SameResult(s1), "regrade differs");
  }
  return "references 100; sabotaged 70; infinite loop timeout/0; regrades identical";
}

size_t DpOracle(std::string_view a, std::string_view b) {
  const auto x = DecodeUtf8(a), y = DecodeUtf8(b);
  std::vector<std::vector<size_t>> d(x.size() + 1, std::vector<size_t>(y.size() + 1));
  for (size_t i = 0; i <= x.size(); ++i) d[i][0] = i;
  for (size_t k = 0; k <= y.size(); ++k) d[0][k] = k;
  for (size_t i = 1; i <= x.size(); ++i) {
    for (size_t k = 1; k <= y.size(); ++k) {
      d[i][k] = std::min({d[i - 1][k] + 1, d[i][k - 1] + 1,
                          d[i - 1][k - 1] + (x[i - 1] == y[k - 1] ? 0 : 1)});
    }
  }
  return d[x.size()][y.size()];
}

std::string MetricsOracles() {
  SeededRng rng(2024);
  static const char* kAlphabet[] = {"a", "b", "c", "é", "ж", " "};
  for (int i = 0; i < 1000; ++i) {
    std::string a, b;
    for (size_t n = rng.Uniform(33); n > 0; --n) a += kAlphabet[rng.Uniform(6)];
    for (size_t n = rng.Uniform(33); n > 0; --n) b += kAlphabet[rng.Uniform(6)];
    Expect(metrics::EditDistance(a, b) == DpOracle(a, b), "edit distance mismatch");
  }
  const double rename = metrics::AstSimilarity(
      "def f(a, b):\n    total = a + b\n    return total\n",
      "def f(x, y):\n    s = x + y\n    return s\n", {"f"}).score;
  const double reformat = metrics::AstSimilarity(
      "def f(a,b):\n    return a+b\n", "# add\ndef f( a, b ):\n\n    return (a +\n            b)\n")
                              .score;
  Expect(rename == 100, "rename-only similarity " + Num(rename));
  Expect(reformat == 100, "reformat-only similarity " + Num(reformat));

  const json sets = json::parse(ReadFile(FixtureDir() / "variety.json")).at("sets");
  std::string counts;
  size_t chained = 0;
  for (const auto& [name, list] : sets.items()) {
    const auto codes = list.get<std::vector<std::string>>();
    Expect(codes.size() <= 10, name + " has more than 10 solutions");
    const auto normalized = metrics::NormalizeAll(codes, {});
    const size_t n = normalized.size();
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n));
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) {
        edge[a][b] = metrics::Compare(normalized[a], normalized[b]).score >= 90;
      }
    }
    std::vector<size_t> reps;
    for (size_t a = 0; a < n; ++a) {
      if (std::none_of(reps.begin(), reps.end(), [&](size_t r) { return edge[a][r]; })) {
        reps.push_back(a);
      }
    }
    const size_t got = metrics::UniqueVariants(name, normalized, 90).unique_count;
    Expect(got == reps.size(), name + ": greedy " + std::to_string(got) + " vs pairwise " +
                                   std::to_string(reps.size()));
    bool transitive = true;
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) {
        for (size_t c = 0; c < n; ++c) {
          if (edge[a][b] && edge[b][c] && !edge[a][c]) transitive = false;
        }
      }
    }
    if (transitive) {
      std::vector<size_t> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<size_t(size_t)> find = [&](size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
          if (edge[a][b]) parent[find(a)] = find(b);
        }
      }
      size_t components = 0;
      for (size_t a = 0; a < n; ++a) components += find(a) == a;
      Expect(components == got, name + ": components " + std::to_string(components));
    } else {
      ++chained;
    }
    counts += (counts.empty() ? "" : ", ") + name + "=" + std::to_string(got);
  }
  return "1000 pairs exact; rename/reformat 100; unique " + counts + " (" +
         std::to_string(chained) + " chained sets checked against greedy oracle only)";
}

std::string EndToEndDeterminism() {
  const json golden = json::parse(ReadFile(FixtureDir() / "golden/report.json"));
  int runs = 0;
  for (size_t workers : {1, 1, 1, 4}) {
    testing::TempDir dir;
    pipeline::RunConfig cfg = pipeline::LoadRunConfig(FixtureDir() / "run_replay.json");
    cfg.output_dir = dir.path();
    cfg.workers = workers;
    const json report = pipeline::Evaluate(cfg);
    Expect(report == golden, "run " + std::to_string(runs + 1) + " (workers=" +
                                 std::to_string(workers) + ") differs from golden");
    Expect(ReadFile(dir / "report.json") == golden.dump(2) + "\n",
           "report.json bytes differ from golden");
    ++runs;
  }
  return std::to_string(runs) + " replay runs (3x1 worker, 1x4 workers) match golden report";
}

std::string TemplateBitExactness() {
  for (const auto& p : Fixtures().problems()) {
    const std::string expected = ReadFile(FixtureDir() / "expected_prompts" / (p.id + ".txt"));
    Expect(genclient::BuildCodegenPrompt(p.prompt_text) == expected, p.id + " differs");
  }
  return std::to_string(Fixtures().size()) + " fixture prompts byte-identical";
}

}  // namespace
}  // namespace perturbkit

int main() {
  using Check = std::pair<const char*, std::string (*)()>;
  const Check checks[] = {
      {"shapley correctness", perturbkit::ShapleyCorrectness},
      {"efficacy definition", perturbkit::EfficacyFidelity},
      {"variant-count law", perturbkit::VariantCountLaw},
      {"homoglyph fidelity", perturbkit::HomoglyphFidelity},
      {"name round-trips", perturbkit::NameRoundTrips},
      {"oracle grading", perturbkit::OracleGrading},
      {"metrics oracles", perturbkit::MetricsOracles},
      {"end-to-end determinism", perturbkit::EndToEndDeterminism},
      {"prompt template bit-exactness", perturbkit::TemplateBitExactness},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : checks) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      detail = fn();
      ok = true;
    } catch (const perturbkit::CheckFailed& e) {
      detail = e.message;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    failed += !ok;
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", index, name, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
