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

#ifndef PERTURBKIT_ORACLE_GRADER_H_
#define PERTURBKIT_ORACLE_GRADER_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "perturbkit/corpus/corpus.h"

namespace perturbkit::oracle {

enum class Outcome { kGraded, kCompileError, kRuntimeError, kTimeout, kOracleMalformed };

std::string_view ToString(Outcome outcome);
std::optional<Outcome> ParseOutcome(std::string_view s);

struct GradeResult {
  std::string problem_id;
  std::string solution_digest;
  double score = 0;  // 100 * passed / total when graded, else 0
  int passed = 0;
  int total = 0;
  Outcome outcome = Outcome::kOracleMalformed;
  std::string stderr_excerpt;

  // Equality that ignores stderr_excerpt.
  bool SameResult(const GradeResult& other) const;
  friend bool operator==(const GradeResult&, const GradeResult&) = default;
};

nlohmann::json ToJson(const GradeResult& r);
GradeResult GradeResultFromJson(const nlohmann::json& j);

struct SandboxOptions {
  // Overrides the oracle's own timeout when set.
  std::optional<double> timeout_seconds;
  std::string python = "python3";
  // Name the candidate is written under inside the sandbox.
  std::string solution_filename = "solution.py";
  bool syntax_check = true;
  size_t stderr_excerpt_bytes = 2048;
};

// Parsed final line of oracle output.
struct OracleLine {
  enum class Kind { kCounts, kError, kUnrecognized } kind = Kind::kUnrecognized;
  int passed = 0;
  int total = 0;
  std::string message;
};

// Interprets the last non-blank line of `stdout_data`: `PASSED <p> TOTAL <t>`
// or `ERROR <message>`.
OracleLine ParseOracleOutput(std::string_view stdout_data);

// Runs the oracle against `code` in a fresh temporary directory holding a
// copy of the oracle workdir. The environment is reduced to an allowlist and
// the whole process group is killed on timeout. Throws PreconditionError for
// a command without `{solution_path}` and IoError when the sandbox itself
// cannot be prepared.
GradeResult Grade(std::string_view problem_id, std::string_view code,
                  const corpus::OracleSpec& oracle, const SandboxOptions& options = {});

}  // namespace perturbkit::oracle

#endif  // PERTURBKIT_ORACLE_GRADER_H_
