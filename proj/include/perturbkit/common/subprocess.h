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

#ifndef PERTURBKIT_COMMON_SUBPROCESS_H_
#define PERTURBKIT_COMMON_SUBPROCESS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace perturbkit {

struct ProcessOptions {
  std::vector<std::string> argv;
  std::string stdin_data;
  // Wall-clock limit. On expiry the whole process group is killed.
  std::optional<double> timeout_seconds;
  // Empty means inherit the caller's working directory.
  std::filesystem::path cwd;
  // When set, replaces the environment entirely ("KEY=VALUE" entries).
  std::optional<std::vector<std::string>> env;
  // Output beyond this many bytes per stream is discarded.
  size_t max_output_bytes = 16 << 20;
};

struct ProcessResult {
  int exit_code = -1;      // valid when the process exited normally
  int term_signal = 0;     // nonzero when killed by a signal
  bool timed_out = false;
  std::string stdout_data;
  std::string stderr_data;

  bool Succeeded() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

// Spawns argv[0] (PATH lookup applies) in a fresh process group, feeds
// stdin_data, and collects both output streams. Throws IoError when the
// process cannot be started.
ProcessResult RunProcess(const ProcessOptions& options);

// Convenience wrapper running `command` through /bin/sh -c.
ProcessOptions ShellCommand(const std::string& command);

// Single-quotes `arg` for POSIX sh.
std::string ShellQuote(const std::string& arg);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_SUBPROCESS_H_
