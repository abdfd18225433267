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

#include "perturbkit/corpus/corpus.h"

#include <regex>
#include <set>

#include "json.hpp"
#include "perturbkit/common/file_util.h"

namespace perturbkit::corpus {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void Malformed(const std::string& id, const std::string& field,
                            const std::string& what) {
  throw CorpusError("manifest entry '" + id + "': field '" + field + "': " + what);
}

const json& Require(const json& entry, const std::string& id,
                    const std::string& field, json::value_t type) {
  if (!entry.contains(field)) Malformed(id, field, "missing");
  const json& v = entry.at(field);
  const bool ok = type == json::value_t::number_float
                      ? v.is_number()
                      : type == json::value_t::number_integer ? v.is_number_integer()
                                                               : v.type() == type;
  if (!ok) Malformed(id, field, std::string("wrong type ") + v.type_name());
  return v;
}

Problem ParseEntry(const json& entry, size_t position, const fs::path& root) {
  const std::string where = "#" + std::to_string(position);
  if (!entry.is_object()) Malformed(where, "<entry>", "not an object");
  if (!entry.contains("id") || !entry["id"].is_string()) {
    Malformed(where, "id", "missing or not a string");
  }
  Problem p;
  p.id = entry["id"].get<std::string>();
  const std::string& id = p.id.empty() ? where : p.id;

  if (entry.contains("course")) {
    p.course = Require(entry, id, "course", json::value_t::string).get<std::string>();
  }
  const auto kind = ParseProblemKind(
      Require(entry, id, "kind", json::value_t::string).get<std::string>());
  if (!kind) Malformed(id, "kind", "expected 'short' or 'long'");
  p.kind = *kind;

  fs::path prompt_path = root / "problems" / p.id / "prompt.txt";
  if (entry.contains("prompt_path")) {
    prompt_path =
        root / Require(entry, id, "prompt_path", json::value_t::string).get<std::string>();
  }
  if (!fs::is_regular_file(prompt_path)) {
    throw CorpusError("manifest entry '" + id + "': missing prompt file " +
                      prompt_path.string());
  }
  p.prompt_text = ReadFile(prompt_path);
  // Editors add a final newline; it is not part of the statement.
  while (!p.prompt_text.empty() &&
         (p.prompt_text.back() == '\n' || p.prompt_text.back() == '\r')) {
    p.prompt_text.pop_back();
  }

  if (entry.contains("identifiers")) {
    const json& ids = Require(entry, id, "identifiers", json::value_t::array);
    for (size_t i = 0; i < ids.size(); ++i) {
      const std::string field = "identifiers[" + std::to_string(i) + "]";
      const json& item = ids[i];
      if (!item.is_object() || !item.contains("role") || !item["role"].is_string() ||
          !item.contains("name") || !item["name"].is_string()) {
        Malformed(id, field, "expected {role, name} strings");
      }
      const auto role = ParseIdentifierRole(item["role"].get<std::string>());
      if (!role) Malformed(id, field + ".role", "expected file, function or class");
      p.identifiers.push_back({*role, item["name"].get<std::string>()});
    }
  }

  const json& oracle = Require(entry, id, "oracle", json::value_t::object);
  p.oracle.command_template =
      Require(oracle, id, "command_template", json::value_t::string).get<std::string>();
  p.oracle.test_count =
      Require(oracle, id, "test_count", json::value_t::number_integer).get<int>();
  p.oracle.timeout_seconds =
      Require(oracle, id, "timeout_seconds", json::value_t::number_float).get<double>();
  p.oracle.workdir = root / "problems" / p.id / "oracle";
  if (oracle.contains("workdir")) {
    p.oracle.workdir =
        root / Require(oracle, id, "workdir", json::value_t::string).get<std::string>();
  }
  if (entry.contains("reference_solution_path")) {
    p.reference_solution_path =
        root / Require(entry, id, "reference_solution_path", json::value_t::string)
                   .get<std::string>();
  }
  return p;
}

size_t CountOccurrences(std::string_view text, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

std::string_view ToString(ProblemKind kind) {
  return kind == ProblemKind::kShort ? "short" : "long";
}

std::string_view ToString(IdentifierRole role) {
  switch (role) {
    case IdentifierRole::kFile:
      return "file";
    case IdentifierRole::kFunction:
      return "function";
    case IdentifierRole::kClass:
      return "class";
  }
  return "function";
}

std::optional<ProblemKind> ParseProblemKind(std::string_view s) {
  if (s == "short") return ProblemKind::kShort;
  if (s == "long") return ProblemKind::kLong;
  return std::nullopt;
}

std::optional<IdentifierRole> ParseIdentifierRole(std::string_view s) {
  if (s == "file") return IdentifierRole::kFile;
  if (s == "function") return IdentifierRole::kFunction;
  if (s == "class") return IdentifierRole::kClass;
  return std::nullopt;
}

std::vector<Violation> ValidateProblem(const Problem& problem) {
  std::vector<Violation> out;
  if (problem.id.empty()) out.push_back({"id", "must be non-empty"});
  if (problem.prompt_text.empty()) out.push_back({"prompt_text", "must be non-empty"});
  for (const auto& ident : problem.identifiers) {
    if (ident.name.empty()) {
      out.push_back({"identifiers", "identifier name must be non-empty"});
    } else if (problem.prompt_text.find(ident.name) == std::string::npos) {
      out.push_back({"identifiers", "'" + ident.name + "' does not occur in prompt_text"});
    }
  }
  const size_t placeholders =
      CountOccurrences(problem.oracle.command_template, "{solution_path}");
  if (placeholders != 1) {
    out.push_back({"oracle.command_template",
                   "must contain {solution_path} exactly once (found " +
                       std::to_string(placeholders) + ")"});
  }
  if (problem.oracle.test_count < 1) {
    out.push_back({"oracle.test_count", "must be >= 1"});
  }
  if (!(problem.oracle.timeout_seconds > 0)) {
    out.push_back({"oracle.timeout_seconds", "must be positive"});
  }
  return out;
}

const Problem* Corpus::Find(std::string_view id) const {
  for (const auto& p : problems_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Corpus LoadCorpus(const fs::path& root) {
  const fs::path manifest_path = root / kManifestName;
  if (!fs::is_regular_file(manifest_path)) {
    throw CorpusError("missing corpus manifest " + manifest_path.string());
  }
  json manifest;
  try {
    manifest = json::parse(ReadFile(manifest_path));
  } catch (const json::parse_error& e) {
    throw CorpusError("manifest " + manifest_path.string() + " is not valid JSON: " +
                      e.what());
  }
  if (!manifest.is_object() || !manifest.contains("problems") ||
      !manifest["problems"].is_array()) {
    throw CorpusError("manifest must be an object with a 'problems' array");
  }

  std::vector<Problem> problems;
  std::set<std::string> seen;
  const json& entries = manifest["problems"];
  for (size_t i = 0; i < entries.size(); ++i) {
    Problem p = ParseEntry(entries[i], i, root);
    if (!seen.insert(p.id).second) {
      throw CorpusError("duplicate problem id '" + p.id + "'");
    }
    const auto violations = ValidateProblem(p);
    if (!violations.empty()) {
      const auto& v = violations.front();
      throw CorpusError("manifest entry '" + p.id + "': field '" + v.field + "': " +
                        v.rule);
    }
    if (!fs::is_directory(p.oracle.workdir)) {
      throw CorpusError("manifest entry '" + p.id + "': field 'oracle.workdir': " +
                        "directory " + p.oracle.workdir.string() + " does not exist");
    }
    if (p.reference_solution_path && !fs::is_regular_file(*p.reference_solution_path)) {
      throw CorpusError("manifest entry '" + p.id +
                        "': missing reference solution " +
                        p.reference_solution_path->string());
    }
    problems.push_back(std::move(p));
  }
  return Corpus(root, std::move(problems));
}

std::vector<Identifier> DetectIdentifiers(std::string_view prompt_text) {
  static const std::regex kFile(R"(\b([A-Za-z_][A-Za-z0-9_]*\.py)\b)");
  static const std::regex kClass(R"(\bclass\s+([A-Z][A-Za-z0-9_]*))");
  static const std::regex kFunction(R"(\b([a-z_][A-Za-z0-9_]*)\()");
  std::vector<Identifier> out;
  std::set<std::string> seen;
  const std::string text(prompt_text);
  auto scan = [&](const std::regex& re, IdentifierRole role) {
    for (std::sregex_iterator it(text.begin(), text.end(), re), end; it != end; ++it) {
      std::string name = (*it)[1].str();
      if (seen.insert(name).second) out.push_back({role, std::move(name)});
    }
  };
  scan(kFile, IdentifierRole::kFile);
  scan(kClass, IdentifierRole::kClass);
  scan(kFunction, IdentifierRole::kFunction);
  return out;
}

}  // namespace perturbkit::corpus
