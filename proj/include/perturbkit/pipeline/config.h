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

#ifndef PERTURBKIT_PIPELINE_CONFIG_H_
#define PERTURBKIT_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/error.h"
#include "perturbkit/genclient/backend.h"
#include "perturbkit/importance/scorer.h"
#include "perturbkit/perturb/perturb.h"

namespace perturbkit::pipeline {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Everything one evaluation run needs. Relative paths in the JSON form
// resolve against the directory of the config file.
//
//   {
//     "corpus_root": "corpus",
//     "backends": {"fake": {"kind": "replay", "store": "store"}},
//     "backend": "fake",
//     "scorer": {"kind": "synthetic_weights", "path": "weights.json"},
//     "provider": {"kind": "fixture_dictionary", "path": "providers.json"},
//     "homoglyphs": "homoglyphs.tsv",
//     "perturb": {"k_top_tokens": 5},
//     "techniques": ["token_remove"],
//     "candidates_per_prompt": 1,
//     "workers": 4,
//     "seed": 7,
//     "output_dir": "out",
//     "importance": {"samples": 200, "exhaustive_limit": 12},
//     "grading": {"timeout_seconds": 10, "python": "python3"},
//     "report": {"nonzero_base_only": true, "variety_threshold": 90}
//   }
struct RunConfig {
  std::filesystem::path config_dir;
  std::filesystem::path corpus_root;
  std::map<std::string, genclient::BackendConfig> backends;
  std::string backend;
  importance::ScorerConfig scorer;
  nlohmann::json provider = nlohmann::json::object();
  std::optional<std::filesystem::path> homoglyphs;  // built-in table when unset
  perturb::PerturbConfig perturb;
  std::vector<perturb::Technique> techniques;  // empty means all
  int candidates_per_prompt = 1;
  size_t workers = 1;
  uint64_t seed = 0;
  std::filesystem::path output_dir;
  int importance_samples = 200;
  size_t exhaustive_limit = 12;
  std::optional<double> grade_timeout_seconds;
  std::string python = "python3";
  bool nonzero_base_only = true;
  double variety_threshold = 90;

  const genclient::BackendConfig& selected_backend() const;
  // Throws ConfigError when a reference is dangling or a value out of range.
  void Validate() const;
};

RunConfig RunConfigFromJson(const nlohmann::json& j, const std::filesystem::path& config_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Parses "a,b,c"; throws ConfigError for an unknown name.
std::vector<perturb::Technique> ParseTechniqueList(const std::string& csv);

}  // namespace perturbkit::pipeline

#endif  // PERTURBKIT_PIPELINE_CONFIG_H_
