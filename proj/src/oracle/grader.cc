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

#include "perturbkit/oracle/grader.h"

#include <stdlib.h>

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <system_error>
#include <vector>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/subprocess.h"

namespace perturbkit::oracle {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kPlaceholder = "{solution_path}";

// Syntax check compiles rather than merely parsing so compile-time errors
// such as `return` outside a function are caught too.
constexpr const char* kCompileCheck =
    "import sys\n"
    "src = open(sys.argv[1], encoding='utf-8').read()\n"
    "compile(src, sys.argv[1], 'exec')\n";

class TempDir {
 public:
  TempDir() {
    const char* base = std::getenv("TMPDIR");
    std::string tmpl = std::string(base && *base ? base : "/tmp") + "/perturbkit-grade-XXXXXX";
    if (mkdtemp(tmpl.data()) == nullptr) throw IoError("cannot create sandbox directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<std::string> SandboxEnv(const fs::path& dir) {
  const char* path = std::getenv("PATH");
  return {
      std::string("PATH=") + (path ? path : "/usr/local/bin:/usr/bin:/bin"),
      "HOME=" + dir.string(),
      "TMPDIR=" + dir.string(),
      "LANG=C.UTF-8",
      "LC_ALL=C.UTF-8",
      "PYTHONDONTWRITEBYTECODE=1",
      "PYTHONHASHSEED=0",
      "PYTHONIOENCODING=utf-8",
  };
}

std::string Excerpt(std::string text, const fs::path& sandbox, size_t limit) {
  const std::string dir = sandbox.string();
  for (size_t pos = text.find(dir); pos != std::string::npos;
       pos = text.find(dir, pos)) {
    text.replace(pos, dir.size(), "<sandbox>");
  }
  if (text.size() <= limit) return text;
  size_t start = text.size() - limit;
  while (start < text.size() && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) {
    ++start;
  }
  return text.substr(start);
}

std::string Expand(const std::string& tmpl, const std::string& solution_path) {
  std::string out = tmpl;
  const std::string quoted = ShellQuote(solution_path);
  for (size_t pos = out.find(kPlaceholder); pos != std::string::npos;
       pos = out.find(kPlaceholder, pos + quoted.size())) {
    out.replace(pos, kPlaceholder.size(), quoted);
  }
  return out;
}

GradeResult Failed(GradeResult r, Outcome outcome) {
  r.outcome = outcome;
  r.score = 0;
  r.passed = 0;
  r.total = 0;
  return r;
}

}  // namespace

std::string_view ToString(Outcome outcome) {
  switch (outcome) {
    case Outcome::kGraded:
      return "graded";
    case Outcome::kCompileError:
      return "compile_error";
    case Outcome::kRuntimeError:
      return "runtime_error";
    case Outcome::kTimeout:
      return "timeout";
    case Outcome::kOracleMalformed:
      return "oracle_malformed";
  }
  return "oracle_malformed";
}

std::optional<Outcome> ParseOutcome(std::string_view s) {
  for (Outcome o : {Outcome::kGraded, Outcome::kCompileError, Outcome::kRuntimeError,
                    Outcome::kTimeout, Outcome::kOracleMalformed}) {
    if (ToString(o) == s) return o;
  }
  return std::nullopt;
}

bool GradeResult::SameResult(const GradeResult& other) const {
  return problem_id == other.problem_id && solution_digest == other.solution_digest &&
         score == other.score && passed == other.passed && total == other.total &&
         outcome == other.outcome;
}

json ToJson(const GradeResult& r) {
  return {{"problem_id", r.problem_id}, {"solution_digest", r.solution_digest},
          {"score", r.score},           {"passed", r.passed},
          {"total", r.total},           {"outcome", ToString(r.outcome)},
          {"stderr_excerpt", r.stderr_excerpt}};
}

GradeResult GradeResultFromJson(const json& j) {
  GradeResult r;
  r.problem_id = j.at("problem_id").get<std::string>();
  r.solution_digest = j.at("solution_digest").get<std::string>();
  r.score = j.at("score").get<double>();
  r.passed = j.at("passed").get<int>();
  r.total = j.at("total").get<int>();
  const auto outcome = ParseOutcome(j.at("outcome").get<std::string>());
  if (!outcome) throw Error("unknown grade outcome " + j.at("outcome").dump());
  r.outcome = *outcome;
  r.stderr_excerpt = j.value("stderr_excerpt", "");
  if (r.score < 0 || r.score > 100 || r.passed < 0 || r.passed > r.total) {
    throw Error("grade result for '" + r.problem_id + "' is out of range");
  }
  return r;
}

OracleLine ParseOracleOutput(std::string_view stdout_data) {
  static const std::regex kCounts(R"(^PASSED\s+(\d{1,9})\s+TOTAL\s+(\d{1,9})\s*$)");
  static const std::regex kError(R"(^ERROR(?:\s+(.*))?$)");
  size_t end = stdout_data.size();
  while (end > 0) {
    const size_t nl = stdout_data.rfind('\n', end - 1);
    const size_t start = nl == std::string_view::npos ? 0 : nl + 1;
    std::string line(stdout_data.substr(start, end - start));
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) {
      OracleLine out;
      std::smatch m;
      if (std::regex_match(line, m, kCounts)) {
        out.kind = OracleLine::Kind::kCounts;
        out.passed = std::stoi(m[1]);
        out.total = std::stoi(m[2]);
      } else if (std::regex_match(line, m, kError)) {
        out.kind = OracleLine::Kind::kError;
        out.message = m[1];
      }
      return out;
    }
    if (nl == std::string_view::npos) break;
    end = nl;
  }
  return {};
}

GradeResult Grade(std::string_view problem_id, std::string_view code,
                  const corpus::OracleSpec& oracle, const SandboxOptions& options) {
  if (oracle.command_template.find(kPlaceholder) == std::string::npos) {
    throw PreconditionError("oracle command has no {solution_path} placeholder");
  }
  GradeResult result;
  result.problem_id = std::string(problem_id);
  result.solution_digest = Sha256Hex(code);

  TempDir sandbox;
  if (!oracle.workdir.empty()) {
    std::error_code ec;
    fs::copy(oracle.workdir, sandbox.path(), fs::copy_options::recursive, ec);
    if (ec) throw IoError("cannot copy oracle assets: " + ec.message());
  }
  const fs::path solution = sandbox.path() / options.solution_filename;
  WriteFile(solution, code);

  const double timeout = options.timeout_seconds.value_or(oracle.timeout_seconds);
  const auto env = SandboxEnv(sandbox.path());

  if (options.syntax_check) {
    ProcessOptions check;
    check.argv = {options.python, "-c", kCompileCheck, solution.string()};
    check.cwd = sandbox.path();
    check.env = env;
    check.timeout_seconds = timeout;
    const ProcessResult r = RunProcess(check);
    if (r.timed_out) {
      return Failed(result, Outcome::kTimeout);
    }
    if (!r.Succeeded()) {
      result.stderr_excerpt = Excerpt(r.stderr_data, sandbox.path(),
                                      options.stderr_excerpt_bytes);
      return Failed(result, Outcome::kCompileError);
    }
  }

  ProcessOptions run = ShellCommand(Expand(oracle.command_template, solution.string()));
  run.cwd = sandbox.path();
  run.env = env;
  run.timeout_seconds = timeout;
  const ProcessResult r = RunProcess(run);
  result.stderr_excerpt = Excerpt(r.stderr_data, sandbox.path(), options.stderr_excerpt_bytes);
  if (r.timed_out) return Failed(result, Outcome::kTimeout);

  const OracleLine line = ParseOracleOutput(r.stdout_data);
  switch (line.kind) {
    case OracleLine::Kind::kCounts:
      if (line.total != oracle.test_count || line.passed > line.total) {
        return Failed(result, Outcome::kOracleMalformed);
      }
      result.outcome = Outcome::kGraded;
      result.passed = line.passed;
      result.total = line.total;
      result.score = 100.0 * line.passed / line.total;
      return result;
    case OracleLine::Kind::kError:
      if (result.stderr_excerpt.empty()) result.stderr_excerpt = line.message;
      return Failed(result, Outcome::kRuntimeError);
    case OracleLine::Kind::kUnrecognized:
      break;
  }
  return Failed(result, r.term_signal != 0 ? Outcome::kRuntimeError
                                           : Outcome::kOracleMalformed);
}

}  // namespace perturbkit::oracle
