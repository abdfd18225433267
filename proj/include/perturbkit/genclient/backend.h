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

#ifndef PERTURBKIT_GENCLIENT_BACKEND_H_
#define PERTURBKIT_GENCLIENT_BACKEND_H_

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbkit/common/error.h"

namespace perturbkit::genclient {

enum class BackendKind { kHttpChat, kLocalCommand, kReplay };

std::string_view ToString(BackendKind kind);
std::optional<BackendKind> ParseBackendKind(std::string_view s);

struct GenParams {
  double temperature = 0;
  int max_tokens = 2048;
  int n_candidates = 1;
};

struct BackendConfig {
  std::string name;  // recorded as Solution::backend_id
  BackendKind kind = BackendKind::kReplay;
  std::string model_id;
  GenParams params;

  // http_chat: full URL of the chat-completions endpoint.
  std::string endpoint;
  // http_chat: environment variable holding the bearer token.
  std::string api_key_env = "PERTURBKIT_API_KEY";
  // local_command: shell command; prompt on stdin, response on stdout.
  std::string command;
  // local_command: working directory; defaults to the config file's directory.
  std::filesystem::path workdir;

  // Live backends record every call here when set; replay reads from it.
  std::filesystem::path store_dir;

  int max_retries = 3;
  double retry_base_delay_seconds = 0.5;
  double timeout_seconds = 120;
  int max_concurrency = 4;
  std::vector<std::string> refusal_phrases;
};

// Relative paths in `j` resolve against `base_dir`.
BackendConfig BackendConfigFromJson(const std::string& name, const nlohmann::json& j,
                                    const std::filesystem::path& base_dir);

class TransportError : public Error {
 public:
  using Error::Error;
};

class ReplayMissError : public Error {
 public:
  ReplayMissError(std::string digest)
      : Error("replay store has no response for request digest " + digest),
        digest_(std::move(digest)) {}
  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

// Content-addressed request/response files: `<dir>/<digest>.json` holding
// {"request": ..., "responses": [...]}. Reads are concurrent, writes are
// serialized and atomic.
class ReplayStore {
 public:
  explicit ReplayStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Canonical request object for a (model, prompt, params) triple.
  static nlohmann::json Request(const std::string& model_id, const std::string& prompt,
                                const GenParams& params, int n);
  static std::string Digest(const nlohmann::json& request);

  std::optional<std::vector<std::string>> Get(const std::string& digest) const;
  void Put(const std::string& digest, const nlohmann::json& request,
           const std::vector<std::string>& responses);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex write_mu_;
};

// A source of raw model responses.
class GenBackend {
 public:
  explicit GenBackend(BackendConfig config);
  virtual ~GenBackend() = default;

  // Up to n raw responses for `prompt`. Live backends record each call in
  // the store (when configured); the replay backend serves only recorded
  // calls and throws ReplayMissError otherwise.
  std::vector<std::string> Complete(const std::string& prompt, int n);

  const BackendConfig& config() const { return config_; }

 protected:
  virtual std::vector<std::string> CompleteLive(const std::string& prompt, int n) = 0;
  virtual bool is_replay() const { return false; }

 private:
  BackendConfig config_;
  std::unique_ptr<ReplayStore> store_;
  std::counting_semaphore<> in_flight_;
};

std::unique_ptr<GenBackend> MakeBackend(const BackendConfig& config);

struct Solution {
  std::string problem_id;
  std::string variant_digest;
  std::string backend_id;
  std::string raw_response;
  std::string code;
  int candidate_index = 0;
  bool refusal_flag = false;

  friend bool operator==(const Solution&, const Solution&) = default;
};

nlohmann::json ToJson(const Solution& s);
Solution SolutionFromJson(const nlohmann::json& j);

// Requests n candidates and turns each raw response into a Solution. A
// refusal sets refusal_flag and leaves the code empty.
std::vector<Solution> Generate(GenBackend& backend, const std::string& problem_id,
                               const std::string& variant_digest,
                               const std::string& prompt, int n);

}  // namespace perturbkit::genclient

#endif  // PERTURBKIT_GENCLIENT_BACKEND_H_
