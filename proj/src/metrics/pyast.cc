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

#include "perturbkit/metrics/pyast.h"

#include "json.hpp"
#include "perturbkit/common/error.h"
#include "perturbkit/common/subprocess.h"

namespace perturbkit::metrics {
namespace {

using nlohmann::json;

constexpr int kSyntaxExit = 3;

constexpr const char* kDumper = R"PY(
import ast, json, sys

BIND = {("FunctionDef", "name"), ("AsyncFunctionDef", "name"), ("ClassDef", "name"),
        ("arg", "arg"), ("ExceptHandler", "name"), ("alias", "asname"),
        ("MatchAs", "name"), ("MatchStar", "name"), ("MatchMapping", "rest")}
FIXED = {("alias", "name"), ("ImportFrom", "module")}
SKIP = {"ctx", "type_comment", "kind"}

def ident(value, bind, renamable=True):
    return {"k": "id", "v": value, "b": bind, "r": renamable}

def field(owner, name, value):
    if value is None:
        return None
    if isinstance(value, ast.AST):
        return conv(value)
    if isinstance(value, str):
        if (type(owner).__name__, name) in FIXED:
            return ident(value, False, False)
        bind = (type(owner).__name__, name) in BIND
        if isinstance(owner, ast.Attribute):
            bind = not isinstance(owner.ctx, ast.Load)
        return ident(value, bind)
    return {"k": name + "=" + repr(value)}

def conv(node):
    if isinstance(node, ast.Constant):
        return {"k": "Constant", "v": repr(node.value)}
    if isinstance(node, ast.Name):
        return {"k": "Name", "c": [ident(node.id, not isinstance(node.ctx, ast.Load))]}
    kids = []
    for name, value in ast.iter_fields(node):
        if name in SKIP:
            continue
        if isinstance(value, list):
            items = [field(node, name, v) for v in value]
            items = [i for i in items if i is not None]
            if items:
                kids.append({"k": name, "c": items})
        else:
            item = field(node, name, value)
            if item is not None:
                kids.append(item)
    return {"k": type(node).__name__, "c": kids}

def dump(source):
    try:
        return conv(ast.parse(source))
    except (SyntaxError, ValueError, RecursionError, MemoryError):
        return None

sys.setrecursionlimit(10000)
if sys.argv[1:] == ["--batch"]:
    sources = json.loads(sys.stdin.buffer.read())
    sys.stdout.write(json.dumps([dump(s) for s in sources]))
else:
    tree = dump(sys.stdin.buffer.read())
    if tree is None:
        sys.exit(3)
    sys.stdout.write(json.dumps(tree))
)PY";

AstNode FromJson(const json& j) {
  AstNode node;
  node.kind = j.at("k").get<std::string>();
  node.value = j.value("v", "");
  node.binds = j.value("b", false);
  node.renamable = j.value("r", false);
  if (j.contains("c")) {
    for (const auto& c : j.at("c")) node.children.push_back(FromJson(c));
  }
  return node;
}

}  // namespace

size_t AstNode::NodeCount() const {
  size_t n = 1;
  for (const auto& c : children) n += c.NodeCount();
  return n;
}

std::optional<AstNode> ParsePython(std::string_view code, const std::string& python) {
  ProcessOptions opts;
  opts.argv = {python, "-c", kDumper};
  opts.stdin_data = std::string(code);
  opts.timeout_seconds = 60;
  const ProcessResult r = RunProcess(opts);
  if (!r.timed_out && r.term_signal == 0 && r.exit_code == kSyntaxExit) return std::nullopt;
  if (!r.Succeeded()) {
    throw IoError("python ast helper failed: " + r.stderr_data.substr(0, 500));
  }
  return FromJson(json::parse(r.stdout_data));
}

std::vector<std::optional<AstNode>> ParsePythonBatch(std::span<const std::string> sources,
                                                     const std::string& python) {
  std::vector<std::optional<AstNode>> out;
  if (sources.empty()) return out;
  ProcessOptions opts;
  opts.argv = {python, "-c", kDumper, "--batch"};
  opts.stdin_data =
      json(std::vector<std::string>(sources.begin(), sources.end()))
          .dump(-1, ' ', false, json::error_handler_t::replace);
  opts.timeout_seconds = 60 + 5.0 * static_cast<double>(sources.size());
  const ProcessResult r = RunProcess(opts);
  if (!r.Succeeded()) {
    throw IoError("python ast helper failed: " + r.stderr_data.substr(0, 500));
  }
  const json trees = json::parse(r.stdout_data);
  for (const auto& t : trees) {
    if (t.is_null()) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(FromJson(t));
    }
  }
  return out;
}

}  // namespace perturbkit::metrics
