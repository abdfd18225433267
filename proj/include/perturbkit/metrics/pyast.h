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

#ifndef PERTURBKIT_METRICS_PYAST_H_
#define PERTURBKIT_METRICS_PYAST_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace perturbkit::metrics {

// Language-neutral view of a Python syntax tree. Identifier occurrences are
// leaves of kind "id"; `binds` marks a binding occurrence (assignment
// target, parameter, def/class name, import alias...) and `renamable` is
// false for module paths.
struct AstNode {
  std::string kind;
  std::string value;
  bool binds = false;
  bool renamable = false;
  std::vector<AstNode> children;

  size_t NodeCount() const;
  friend bool operator==(const AstNode&, const AstNode&) = default;
};

// Parses `code` with the interpreter's own ast module. Comments and layout
// never reach the tree. Returns nullopt on a syntax error; throws IoError if
// the interpreter cannot be run.
std::optional<AstNode> ParsePython(std::string_view code, const std::string& python = "python3");

// Same for many sources with a single interpreter start.
std::vector<std::optional<AstNode>> ParsePythonBatch(std::span<const std::string> sources,
                                                     const std::string& python = "python3");

}  // namespace perturbkit::metrics

#endif  // PERTURBKIT_METRICS_PYAST_H_
