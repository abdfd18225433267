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

#ifndef PERTURBKIT_ORACLE_RESTORE_H_
#define PERTURBKIT_ORACLE_RESTORE_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace perturbkit::oracle {

// Undoes an identifier substitution. `name_map` holds (original, replacement)
// pairs; every occurrence of a replacement is turned back into its original,
// longest replacement first. Throws PreconditionError for an empty entry.
std::string RestoreNames(std::string_view code,
                         std::span<const std::pair<std::string, std::string>> name_map);

}  // namespace perturbkit::oracle

#endif  // PERTURBKIT_ORACLE_RESTORE_H_
