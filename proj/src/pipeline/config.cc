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

#include "perturbkit/pipeline/config.h"

#include <algorithm>
#include <set>

#include "perturbkit/common/file_util.h"

namespace perturbkit::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::set<std::string> kKeys = {
    "corpus_root", "backends", "backend",    "scorer",      "provider",
    "homoglyphs",  "perturb",  "techniques", "candidates_per_prompt",
    "workers",     "seed",     "output_dir", "importance",  "grading",
    "report"};

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

const genclient::BackendConfig& RunConfig::selected_backend() const {
  auto it = backends.find(backend);
  if (it == backends.end()) throw ConfigError("backend '" + backend + "' is not defined");
  return it->second;
}

void RunConfig::Validate() const {
  if (corpus_root.empty()) throw ConfigError("corpus_root is required");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  selected_backend();
  if (candidates_per_prompt < 1) throw ConfigError("candidates_per_prompt must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (importance_samples < 1) throw ConfigError("importance.samples must be >= 1");
  if (exhaustive_limit > 24) throw ConfigError("importance.exhaustive_limit must be <= 24");
  if (variety_threshold < 0 || variety_threshold > 100) {
    throw ConfigError("report.variety_threshold must lie in [0, 100]");
  }
  try {
    perturb.Validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("perturb: ") + e.what());
  }
}

std::vector<perturb::Technique> ParseTechniqueList(const std::string& csv) {
  std::vector<perturb::Technique> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    std::string name = csv.substr(pos, comma - pos);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    pos = comma + 1;
    if (name.empty()) continue;
    const auto t = perturb::ParseTechnique(name);
    if (!t) throw ConfigError("unknown technique '" + name + "'");
    if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
  }
  return out;
}

RunConfig RunConfigFromJson(const json& j, const fs::path& config_dir) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown run config key '" + key + "'");
  }
  RunConfig cfg;
  cfg.config_dir = config_dir;
  try {
    if (j.contains("corpus_root")) {
      cfg.corpus_root = Resolve(config_dir, j.at("corpus_root").get<std::string>());
    }
    if (j.contains("backends")) {
      for (const auto& [name, b] : j.at("backends").items()) {
        cfg.backends.emplace(name, genclient::BackendConfigFromJson(name, b, config_dir));
      }
    }
    cfg.backend = j.value("backend", "");
    if (cfg.backend.empty() && cfg.backends.size() == 1) cfg.backend = cfg.backends.begin()->first;

    if (j.contains("scorer")) {
      const json& s = j.at("scorer");
      const auto kind = importance::ParseScorerKind(s.at("kind").get<std::string>());
      if (!kind) throw ConfigError("unknown scorer kind " + s.at("kind").dump());
      cfg.scorer.kind = *kind;
      if (s.contains("path")) {
        cfg.scorer.config = json::parse(ReadFile(Resolve(config_dir, s.at("path").get<std::string>())));
      } else {
        cfg.scorer.config = s.value("config", json::object());
      }
    }
    if (j.contains("provider")) cfg.provider = j.at("provider");
    if (j.contains("homoglyphs")) {
      cfg.homoglyphs = Resolve(config_dir, j.at("homoglyphs").get<std::string>());
    }
    if (j.contains("perturb")) cfg.perturb = perturb::PerturbConfigFromJson(j.at("perturb"));
    if (j.contains("techniques")) {
      for (const auto& t : j.at("techniques")) {
        const auto parsed = perturb::ParseTechnique(t.get<std::string>());
        if (!parsed) throw ConfigError("unknown technique " + t.dump());
        cfg.techniques.push_back(*parsed);
      }
    }
    cfg.candidates_per_prompt = j.value("candidates_per_prompt", cfg.candidates_per_prompt);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("output_dir")) {
      cfg.output_dir = Resolve(config_dir, j.at("output_dir").get<std::string>());
    }
    if (j.contains("importance")) {
      const json& imp = j.at("importance");
      cfg.importance_samples = imp.value("samples", cfg.importance_samples);
      cfg.exhaustive_limit = imp.value("exhaustive_limit", cfg.exhaustive_limit);
    }
    if (j.contains("grading")) {
      const json& g = j.at("grading");
      if (g.contains("timeout_seconds") && !g.at("timeout_seconds").is_null()) {
        cfg.grade_timeout_seconds = g.at("timeout_seconds").get<double>();
      }
      cfg.python = g.value("python", cfg.python);
    }
    if (j.contains("report")) {
      const json& r = j.at("report");
      cfg.nonzero_base_only = r.value("nonzero_base_only", cfg.nonzero_base_only);
      cfg.variety_threshold = r.value("variety_threshold", cfg.variety_threshold);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const fs::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return RunConfigFromJson(j, fs::absolute(path).parent_path());
}

}  // namespace perturbkit::pipeline
