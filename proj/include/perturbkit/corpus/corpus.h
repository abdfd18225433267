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

#ifndef PERTURBKIT_CORPUS_CORPUS_H_
#define PERTURBKIT_CORPUS_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/common/error.h"

namespace perturbkit::corpus {

// File name of the manifest at the corpus root.
inline constexpr std::string_view kManifestName = "manifest.json";

enum class ProblemKind { kShort, kLong };
enum class IdentifierRole { kFile, kFunction, kClass };

std::string_view ToString(ProblemKind kind);
std::string_view ToString(IdentifierRole role);
std::optional<ProblemKind> ParseProblemKind(std::string_view s);
std::optional<IdentifierRole> ParseIdentifierRole(std::string_view s);

struct Identifier {
  IdentifierRole role = IdentifierRole::kFunction;
  std::string name;
  friend bool operator==(const Identifier&, const Identifier&) = default;
};

struct OracleSpec {
  // Shell command; `{solution_path}` expands to the candidate file.
  std::string command_template;
  int test_count = 0;
  double timeout_seconds = 0;
  std::filesystem::path workdir;
};

// One assignment task: a prompt plus everything needed to grade answers.
struct Problem {
  std::string id;
  std::string course;
  ProblemKind kind = ProblemKind::kShort;
  std::string prompt_text;
  std::vector<Identifier> identifiers;
  OracleSpec oracle;
  std::optional<std::filesystem::path> reference_solution_path;
};

struct Violation {
  std::string field;
  std::string rule;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Checks every Problem invariant. Violations are data, never thrown.
std::vector<Violation> ValidateProblem(const Problem& problem);

class CorpusError : public Error {
 public:
  using Error::Error;
};

class Corpus {
 public:
  Corpus() = default;
  Corpus(std::filesystem::path root, std::vector<Problem> problems)
      : root_(std::move(root)), problems_(std::move(problems)) {}

  const std::filesystem::path& root() const { return root_; }
  const std::vector<Problem>& problems() const { return problems_; }
  size_t size() const { return problems_.size(); }

  // nullptr when absent.
  const Problem* Find(std::string_view id) const;

 private:
  std::filesystem::path root_;
  std::vector<Problem> problems_;
};

// Loads `<root>/manifest.json`. Throws CorpusError for a missing manifest,
// malformed entries (message names the problem id and field), duplicate ids,
// missing prompt files, or any Problem invariant violation.
Corpus LoadCorpus(const std::filesystem::path& root);

// Heuristic guess at graded names (`foo(`, `class Foo`, `foo.py`). Only a
// hint for manifest authors; declared identifiers always win.
std::vector<Identifier> DetectIdentifiers(std::string_view prompt_text);

}  // namespace perturbkit::corpus

#endif  // PERTURBKIT_CORPUS_CORPUS_H_
