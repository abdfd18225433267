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

#include <algorithm>
#include <cstdlib>

#include "gtest/gtest.h"
#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/text.h"
#include "perturbkit/corpus/corpus.h"
#include "perturbkit/oracle/grader.h"
#include "perturbkit/oracle/restore.h"
#include "perturbkit/perturb/perturb.h"
#include "test_util.h"

namespace perturbkit::oracle {
namespace {

namespace fs = std::filesystem;
using perturbkit::testing::FixtureDir;
using perturbkit::testing::TempDir;

class FixtureOracleTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new corpus::Corpus(corpus::LoadCorpus(FixtureDir() / "corpus"));
  }
  static void TearDownTestSuite() { delete corpus_; }

  const corpus::Problem& problem(const std::string& id) { return *corpus_->Find(id); }
  static std::string Solution(const std::string& name) {
    return ReadFile(FixtureDir() / "solutions" / name);
  }

  static corpus::Corpus* corpus_;
};
corpus::Corpus* FixtureOracleTest::corpus_ = nullptr;

std::vector<std::string> ListFilesRecursive(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    out.push_back(fs::relative(e.path(), root).string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

corpus::OracleSpec ShellOracle(const fs::path& dir, const std::string& command, int tests = 10) {
  return {"test -f {solution_path}; " + command, tests, 10, dir};
}

TEST(ParseOracleOutputTest, Lines) {
  auto l = ParseOracleOutput("noise\nPASSED 3 TOTAL 10\n\n");
  EXPECT_EQ(l.kind, OracleLine::Kind::kCounts);
  EXPECT_EQ(l.passed, 3);
  EXPECT_EQ(l.total, 10);
  l = ParseOracleOutput("ERROR import failed: ValueError\n");
  EXPECT_EQ(l.kind, OracleLine::Kind::kError);
  EXPECT_EQ(l.message, "import failed: ValueError");
  EXPECT_EQ(ParseOracleOutput("PASSED 3 TOTAL 10\nbye").kind, OracleLine::Kind::kUnrecognized);
  EXPECT_EQ(ParseOracleOutput("PASSED x TOTAL 10").kind, OracleLine::Kind::kUnrecognized);
  EXPECT_EQ(ParseOracleOutput("").kind, OracleLine::Kind::kUnrecognized);
}

TEST(OutcomeTest, NamesRoundTrip) {
  for (Outcome o : {Outcome::kGraded, Outcome::kCompileError, Outcome::kRuntimeError,
                    Outcome::kTimeout, Outcome::kOracleMalformed}) {
    EXPECT_EQ(ParseOutcome(ToString(o)), o);
  }
  EXPECT_FALSE(ParseOutcome("graded_ok").has_value());
}

TEST_F(FixtureOracleTest, ReferenceSolutionsScoreFull) {
  for (const char* id : {"jaccard", "board", "word_count"}) {
    const auto& p = problem(id);
    ASSERT_TRUE(p.reference_solution_path.has_value());
    const GradeResult r = Grade(id, ReadFile(*p.reference_solution_path), p.oracle);
    EXPECT_EQ(r.outcome, Outcome::kGraded) << id << ": " << r.stderr_excerpt;
    EXPECT_DOUBLE_EQ(r.score, 100) << id;
    EXPECT_EQ(r.total, 10);
  }
}

TEST_F(FixtureOracleTest, SabotagedScoresSeventy) {
  const std::string code = Solution("jaccard_sabotaged.py");
  const GradeResult r = Grade("jaccard", code, problem("jaccard").oracle);
  EXPECT_EQ(r.outcome, Outcome::kGraded);
  EXPECT_EQ(r.passed, 7);
  EXPECT_DOUBLE_EQ(r.score, 70);
  EXPECT_EQ(r.solution_digest, Sha256Hex(code));
}

TEST_F(FixtureOracleTest, InfiniteLoopTimesOut) {
  SandboxOptions opts;
  opts.timeout_seconds = 2;
  const GradeResult r =
      Grade("jaccard", Solution("jaccard_infinite.py"), problem("jaccard").oracle, opts);
  EXPECT_EQ(r.outcome, Outcome::kTimeout);
  EXPECT_DOUBLE_EQ(r.score, 0);
  EXPECT_EQ(r.passed, 0);
}

TEST_F(FixtureOracleTest, SyntaxErrorIsCompileError) {
  const GradeResult r =
      Grade("jaccard", Solution("jaccard_syntax_error.py"), problem("jaccard").oracle);
  EXPECT_EQ(r.outcome, Outcome::kCompileError);
  EXPECT_DOUBLE_EQ(r.score, 0);
  EXPECT_EQ(r.stderr_excerpt.find(fs::temp_directory_path().string() + "/"), std::string::npos);
}

TEST_F(FixtureOracleTest, SyntaxErrorWithoutPrecheckIsReportedByOracle) {
  SandboxOptions opts;
  opts.syntax_check = false;
  const GradeResult r =
      Grade("jaccard", Solution("jaccard_syntax_error.py"), problem("jaccard").oracle, opts);
  EXPECT_EQ(r.outcome, Outcome::kRuntimeError);
}

TEST_F(FixtureOracleTest, ImportCrashIsRuntimeError) {
  const GradeResult r =
      Grade("jaccard", Solution("jaccard_import_crash.py"), problem("jaccard").oracle);
  EXPECT_EQ(r.outcome, Outcome::kRuntimeError);
  EXPECT_DOUBLE_EQ(r.score, 0);
}

TEST_F(FixtureOracleTest, EmptyCodeScoresZero) {
  const GradeResult r = Grade("jaccard", "", problem("jaccard").oracle);
  EXPECT_NE(r.outcome, Outcome::kGraded);
  EXPECT_DOUBLE_EQ(r.score, 0);
}

TEST_F(FixtureOracleTest, RepeatedGradingIsIdentical) {
  const auto& p = problem("word_count");
  const std::string code = ReadFile(*p.reference_solution_path);
  const GradeResult first = Grade("word_count", code, p.oracle);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(Grade("word_count", code, p.oracle).SameResult(first));
  const std::string sab = Solution("jaccard_sabotaged.py");
  const GradeResult s1 = Grade("jaccard", sab, problem("jaccard").oracle);
  EXPECT_TRUE(Grade("jaccard", sab, problem("jaccard").oracle).SameResult(s1));
}

TEST_F(FixtureOracleTest, SandboxLeavesOracleDirectoryUntouched) {
  const auto& p = problem("jaccard");
  const auto before = ListFilesRecursive(p.oracle.workdir);
  const std::string code =
      "open('scratch.txt', 'w').write('x')\n" + ReadFile(*p.reference_solution_path);
  EXPECT_DOUBLE_EQ(Grade("jaccard", code, p.oracle).score, 100);
  EXPECT_EQ(ListFilesRecursive(p.oracle.workdir), before);
}

TEST(GradeTest, TotalMismatchIsMalformed) {
  TempDir dir;
  const GradeResult r = Grade("p", "x = 1\n", ShellOracle(dir.path(), "echo PASSED 3 TOTAL 5"));
  EXPECT_EQ(r.outcome, Outcome::kOracleMalformed);
  EXPECT_DOUBLE_EQ(r.score, 0);
}

TEST(GradeTest, MorePassedThanTotalIsMalformed) {
  TempDir dir;
  EXPECT_EQ(Grade("p", "x = 1\n", ShellOracle(dir.path(), "echo PASSED 11 TOTAL 10")).outcome,
            Outcome::kOracleMalformed);
}

TEST(GradeTest, GarbageOutputIsMalformed) {
  TempDir dir;
  EXPECT_EQ(Grade("p", "x = 1\n", ShellOracle(dir.path(), "echo hello")).outcome,
            Outcome::kOracleMalformed);
}

TEST(GradeTest, CountsAcceptedDespiteNonzeroExit) {
  TempDir dir;
  const GradeResult r =
      Grade("p", "x = 1\n", ShellOracle(dir.path(), "echo PASSED 4 TOTAL 10; exit 1"));
  EXPECT_EQ(r.outcome, Outcome::kGraded);
  EXPECT_DOUBLE_EQ(r.score, 40);
}

TEST(GradeTest, SignalIsRuntimeError) {
  TempDir dir;
  EXPECT_EQ(Grade("p", "x = 1\n", ShellOracle(dir.path(), "kill -9 $$")).outcome,
            Outcome::kRuntimeError);
}

TEST(GradeTest, MissingPlaceholderRejected) {
  TempDir dir;
  EXPECT_THROW(Grade("p", "x", {"echo PASSED 1 TOTAL 1", 1, 10, dir.path()}), Error);
}

TEST(GradeTest, SolutionPathPlaceholderAndEnvironmentAllowlist) {
  TempDir dir;
  ::setenv("PERTURBKIT_LEAK_CHECK", "1", 1);
  const std::string cmd =
      "test -f {solution_path} && test -z \"$PERTURBKIT_LEAK_CHECK\" && "
      "test \"$PYTHONHASHSEED\" = 0 && echo PASSED 1 TOTAL 1 || echo PASSED 0 TOTAL 1";
  const GradeResult r = Grade("p", "x = 1\n", ShellOracle(dir.path(), cmd, 1));
  EXPECT_DOUBLE_EQ(r.score, 100);
}

TEST(GradeTest, StderrExcerptHidesSandboxPath) {
  TempDir dir;
  const GradeResult r =
      Grade("p", "x = 1\n", ShellOracle(dir.path(), "pwd >&2; echo ERROR fail"));
  EXPECT_EQ(r.outcome, Outcome::kRuntimeError);
  EXPECT_NE(r.stderr_excerpt.find("<sandbox>"), std::string::npos) << r.stderr_excerpt;
}

TEST(GradeResultTest, JsonRoundTrip) {
  GradeResult r{"p", "abc", 70, 7, 10, Outcome::kGraded, "warn"};
  EXPECT_EQ(GradeResultFromJson(ToJson(r)), r);
  GradeResult other = r;
  other.stderr_excerpt = "different";
  EXPECT_TRUE(r.SameResult(other));
  other.passed = 6;
  EXPECT_FALSE(r.SameResult(other));
  auto j = ToJson(r);
  j["outcome"] = "nope";
  EXPECT_THROW(GradeResultFromJson(j), Error);
}

TEST(RestoreNamesTest, ReversesMap) {
  const perturb::NameMap map = {{"jaccard", "qwertyu"}, {"board.py", "zzzzz.py"}};
  EXPECT_EQ(RestoreNames("def qwertyu(a):\n    # see zzzzz.py\n", map),
            "def jaccard(a):\n    # see board.py\n");
  EXPECT_THROW(RestoreNames("x", perturb::NameMap{{"", "a"}}), PreconditionError);
}

TEST_F(FixtureOracleTest, RandomReplaceRoundTripOnFixtureSolution) {
  const auto& p = problem("board");
  const std::string reference = ReadFile(*p.reference_solution_path);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = perturb::RandomReplace(p.prompt_text, p.identifiers, seed);
    ASSERT_TRUE(v.name_map);
    EXPECT_EQ(RestoreNames(v.text, *v.name_map), p.prompt_text);
    // A model answering the renamed prompt uses the replacement names.
    const std::string renamed = SubstituteLongestFirst(reference, *v.name_map);
    ASSERT_NE(renamed, reference);
    const std::string restored = RestoreNames(renamed, *v.name_map);
    EXPECT_EQ(restored, reference);
  }
  const auto v = perturb::RandomReplace(p.prompt_text, p.identifiers, 1);
  const std::string renamed = SubstituteLongestFirst(reference, *v.name_map);
  EXPECT_DOUBLE_EQ(Grade("board", renamed, p.oracle).score, 0);
  EXPECT_DOUBLE_EQ(Grade("board", RestoreNames(renamed, *v.name_map), p.oracle).score, 100);
}

}  // namespace
}  // namespace perturbkit::oracle
