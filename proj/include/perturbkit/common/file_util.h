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

#ifndef PERTURBKIT_COMMON_FILE_UTIL_H_
#define PERTURBKIT_COMMON_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace perturbkit {

std::string ReadFile(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, creating parent
// directories as needed.
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Write-once semantics for run directories: succeeds if the file is absent or
// already holds exactly `content`; throws IoError otherwise.
void WriteFileOnce(const std::filesystem::path& path, std::string_view content);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_FILE_UTIL_H_
