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

#include "perturbkit/oracle/restore.h"

#include <vector>

#include "perturbkit/common/error.h"
#include "perturbkit/common/text.h"

namespace perturbkit::oracle {

std::string RestoreNames(std::string_view code,
                         std::span<const std::pair<std::string, std::string>> name_map) {
  std::vector<std::pair<std::string, std::string>> reverse;
  reverse.reserve(name_map.size());
  for (const auto& [original, replacement] : name_map) {
    if (original.empty() || replacement.empty()) {
      throw PreconditionError("name map entries must be non-empty");
    }
    reverse.emplace_back(replacement, original);
  }
  return SubstituteLongestFirst(code, reverse);
}

}  // namespace perturbkit::oracle
