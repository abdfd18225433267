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

#include "perturbkit/genclient/backend.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "perturbkit/common/digest.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/http_util.h"
#include "perturbkit/common/subprocess.h"
#include "perturbkit/genclient/codegen.h"

extern char** environ;

namespace perturbkit::genclient {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void Backoff(const BackendConfig& cfg, int attempt) {
  const double delay = cfg.retry_base_delay_seconds * static_cast<double>(1 << attempt);
  std::this_thread::sleep_for(std::chrono::duration<double>(delay));
}

class HttpChatBackend : public GenBackend {
 public:
  using GenBackend::GenBackend;

 protected:
  std::vector<std::string> CompleteLive(const std::string& prompt, int n) override {
    const BackendConfig& cfg = config();
    if (cfg.endpoint.empty()) throw TransportError("http_chat backend has no endpoint");
    const json body = {{"model", cfg.model_id},
                       {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                       {"temperature", cfg.params.temperature},
                       {"max_tokens", cfg.params.max_tokens},
                       {"n", n}};
    std::vector<std::pair<std::string, std::string>> headers;
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
      headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      if (attempt > 0) Backoff(cfg, attempt - 1);
      HttpResponse res;
      try {
        res = HttpPost(cfg.endpoint, body.dump(), "application/json", headers,
                       cfg.timeout_seconds);
      } catch (const IoError& e) {
        last_error = e.what();
        continue;
      }
      if (res.status == 429 || res.status >= 500) {
        last_error = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 300);
        continue;
      }
      if (res.status != 200) {
        throw TransportError("chat endpoint returned HTTP " + std::to_string(res.status) +
                             ": " + res.body.substr(0, 300));
      }
      try {
        const json parsed = json::parse(res.body);
        std::vector<std::string> out;
        for (const auto& choice : parsed.at("choices")) {
          out.push_back(choice.at("message").at("content").get<std::string>());
          if (static_cast<int>(out.size()) == n) break;
        }
        return out;
      } catch (const json::exception& e) {
        throw TransportError(std::string("malformed chat response: ") + e.what());
      }
    }
    throw TransportError("chat request failed after " + std::to_string(cfg.max_retries + 1) +
                         " attempts: " + last_error);
  }
};

class LocalCommandBackend : public GenBackend {
 public:
  using GenBackend::GenBackend;

 protected:
  std::vector<std::string> CompleteLive(const std::string& prompt, int n) override {
    const BackendConfig& cfg = config();
    if (cfg.command.empty()) throw TransportError("local_command backend has no command");
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(RunOnce(prompt, i));
    return out;
  }

 private:
  std::string RunOnce(const std::string& prompt, int candidate) {
    const BackendConfig& cfg = config();
    ProcessOptions opts = ShellCommand(cfg.command);
    opts.stdin_data = prompt;
    opts.timeout_seconds = cfg.timeout_seconds;
    opts.cwd = cfg.workdir;
    std::vector<std::string> env;
    for (char** e = environ; e && *e; ++e) env.emplace_back(*e);
    env.push_back("PERTURBKIT_CANDIDATE_INDEX=" + std::to_string(candidate));
    env.push_back("PERTURBKIT_MODEL_ID=" + cfg.model_id);
    env.push_back("PERTURBKIT_TEMPERATURE=" + std::to_string(cfg.params.temperature));
    env.push_back("PERTURBKIT_MAX_TOKENS=" + std::to_string(cfg.params.max_tokens));
    opts.env = std::move(env);
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      if (attempt > 0) Backoff(cfg, attempt - 1);
      const ProcessResult r = RunProcess(opts);
      if (r.Succeeded()) return r.stdout_data;
      last_error = r.timed_out ? "timed out"
                               : "exit " + std::to_string(r.exit_code) + ": " +
                                     r.stderr_data.substr(0, 300);
    }
    throw TransportError("generation command failed: " + last_error);
  }
};

class ReplayBackend : public GenBackend {
 public:
  using GenBackend::GenBackend;

 protected:
  std::vector<std::string> CompleteLive(const std::string&, int) override {
    throw TransportError("replay backend never performs live calls");
  }
  bool is_replay() const override { return true; }
};

}  // namespace

std::string_view ToString(BackendKind kind) {
  switch (kind) {
    case BackendKind::kHttpChat:
      return "http_chat";
    case BackendKind::kLocalCommand:
      return "local_command";
    case BackendKind::kReplay:
      return "replay";
  }
  return "replay";
}

std::optional<BackendKind> ParseBackendKind(std::string_view s) {
  if (s == "http_chat") return BackendKind::kHttpChat;
  if (s == "local_command") return BackendKind::kLocalCommand;
  if (s == "replay") return BackendKind::kReplay;
  return std::nullopt;
}

BackendConfig BackendConfigFromJson(const std::string& name, const json& j,
                                    const fs::path& base_dir) {
  BackendConfig cfg;
  cfg.name = name;
  try {
    const auto kind = ParseBackendKind(j.at("kind").get<std::string>());
    if (!kind) throw Error("backend '" + name + "': unknown kind " + j.at("kind").dump());
    cfg.kind = *kind;
    cfg.model_id = j.value("model_id", name);
    if (j.contains("params")) {
      const json& p = j.at("params");
      cfg.params.temperature = p.value("temperature", cfg.params.temperature);
      cfg.params.max_tokens = p.value("max_tokens", cfg.params.max_tokens);
      cfg.params.n_candidates = p.value("n_candidates", cfg.params.n_candidates);
    }
    cfg.endpoint = j.value("endpoint", "");
    cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
    cfg.command = j.value("command", "");
    cfg.workdir = base_dir;
    if (j.contains("store")) {
      fs::path store = j.at("store").get<std::string>();
      cfg.store_dir = store.is_absolute() ? store : base_dir / store;
    }
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.retry_base_delay_seconds =
        j.value("retry_base_delay_seconds", cfg.retry_base_delay_seconds);
    cfg.timeout_seconds = j.value("timeout_seconds", cfg.timeout_seconds);
    cfg.max_concurrency = j.value("max_concurrency", cfg.max_concurrency);
    if (j.contains("refusal_phrases")) {
      cfg.refusal_phrases = j.at("refusal_phrases").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw Error("backend '" + name + "': " + e.what());
  }
  if (cfg.kind == BackendKind::kReplay && cfg.store_dir.empty()) {
    throw Error("backend '" + name + "': replay backend needs a 'store' directory");
  }
  return cfg;
}

json ReplayStore::Request(const std::string& model_id, const std::string& prompt,
                          const GenParams& params, int n) {
  return {{"model_id", model_id},
          {"prompt", prompt},
          {"temperature", params.temperature},
          {"max_tokens", params.max_tokens},
          {"n", n}};
}

std::string ReplayStore::Digest(const json& request) { return Sha256Hex(request.dump()); }

std::optional<std::vector<std::string>> ReplayStore::Get(const std::string& digest) const {
  const fs::path path = dir_ / (digest + ".json");
  if (!fs::is_regular_file(path)) return std::nullopt;
  const json j = json::parse(ReadFile(path));
  return j.at("responses").get<std::vector<std::string>>();
}

void ReplayStore::Put(const std::string& digest, const json& request,
                      const std::vector<std::string>& responses) {
  const json entry = {{"request", request}, {"responses", responses}};
  std::lock_guard lock(write_mu_);
  WriteFile(dir_ / (digest + ".json"), entry.dump(2) + "\n");
}

GenBackend::GenBackend(BackendConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, config_.max_concurrency)) {
  if (config_.refusal_phrases.empty()) config_.refusal_phrases = DefaultRefusalPhrases();
  if (!config_.store_dir.empty()) store_ = std::make_unique<ReplayStore>(config_.store_dir);
}

std::vector<std::string> GenBackend::Complete(const std::string& prompt, int n) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  const json request = ReplayStore::Request(config_.model_id, prompt, config_.params, n);
  const std::string digest = ReplayStore::Digest(request);
  if (is_replay()) {
    auto hit = store_->Get(digest);
    if (!hit) throw ReplayMissError(digest);
    return *hit;
  }
  in_flight_.acquire();
  std::vector<std::string> responses;
  try {
    responses = CompleteLive(prompt, n);
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();
  if (store_) store_->Put(digest, request, responses);
  return responses;
}

std::unique_ptr<GenBackend> MakeBackend(const BackendConfig& config) {
  switch (config.kind) {
    case BackendKind::kHttpChat:
      return std::make_unique<HttpChatBackend>(config);
    case BackendKind::kLocalCommand:
      return std::make_unique<LocalCommandBackend>(config);
    case BackendKind::kReplay:
      return std::make_unique<ReplayBackend>(config);
  }
  throw Error("unknown backend kind");
}

json ToJson(const Solution& s) {
  return {{"problem_id", s.problem_id},         {"variant_digest", s.variant_digest},
          {"backend_id", s.backend_id},         {"raw_response", s.raw_response},
          {"code", s.code},                     {"candidate_index", s.candidate_index},
          {"refusal_flag", s.refusal_flag}};
}

Solution SolutionFromJson(const json& j) {
  Solution s;
  s.problem_id = j.at("problem_id").get<std::string>();
  s.variant_digest = j.at("variant_digest").get<std::string>();
  s.backend_id = j.at("backend_id").get<std::string>();
  s.raw_response = j.at("raw_response").get<std::string>();
  s.code = j.at("code").get<std::string>();
  s.candidate_index = j.at("candidate_index").get<int>();
  s.refusal_flag = j.at("refusal_flag").get<bool>();
  return s;
}

std::vector<Solution> Generate(GenBackend& backend, const std::string& problem_id,
                               const std::string& variant_digest,
                               const std::string& prompt, int n) {
  const auto responses = backend.Complete(prompt, n);
  std::vector<Solution> out;
  for (size_t i = 0; i < responses.size(); ++i) {
    Solution s;
    s.problem_id = problem_id;
    s.variant_digest = variant_digest;
    s.backend_id = backend.config().name;
    s.raw_response = responses[i];
    s.candidate_index = static_cast<int>(i);
    s.refusal_flag = LooksLikeRefusal(s.raw_response, backend.config().refusal_phrases);
    if (!s.refusal_flag) s.code = ExtractCode(s.raw_response);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace perturbkit::genclient
