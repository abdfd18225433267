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

#include "perturbkit/perturb/text_provider.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "perturbkit/common/file_util.h"

namespace perturbkit::perturb {

using nlohmann::json;

namespace {

std::string Trim(std::string_view s, std::string_view junk) {
  const size_t first = s.find_first_not_of(junk);
  if (first == std::string_view::npos) return "";
  const size_t last = s.find_last_not_of(junk);
  return std::string(s.substr(first, last - first + 1));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

FixtureDictionaryProvider::FixtureDictionaryProvider(
    std::map<std::string, std::vector<std::string>> synonyms,
    std::map<std::string, std::string> rephrasings,
    std::optional<std::string> rephrase_prefix)
    : synonyms_(std::move(synonyms)),
      rephrasings_(std::move(rephrasings)),
      rephrase_prefix_(std::move(rephrase_prefix)) {}

std::unique_ptr<FixtureDictionaryProvider> FixtureDictionaryProvider::FromJson(
    const json& j) {
  try {
    std::map<std::string, std::vector<std::string>> synonyms;
    std::map<std::string, std::string> rephrasings;
    std::optional<std::string> prefix;
    if (j.contains("synonyms")) {
      synonyms = j.at("synonyms").get<std::map<std::string, std::vector<std::string>>>();
    }
    if (j.contains("rephrasings")) {
      rephrasings = j.at("rephrasings").get<std::map<std::string, std::string>>();
    }
    if (j.contains("rephrase_prefix")) prefix = j.at("rephrase_prefix").get<std::string>();
    return std::make_unique<FixtureDictionaryProvider>(std::move(synonyms),
                                                       std::move(rephrasings), prefix);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("invalid fixture dictionary: ") + e.what());
  }
}

std::vector<std::string> FixtureDictionaryProvider::Synonyms(std::string_view token,
                                                             std::string_view) {
  auto it = synonyms_.find(std::string(token));
  if (it == synonyms_.end()) return {};
  std::vector<std::string> out;
  std::set<std::string> seen{std::string(token)};
  for (const auto& s : it->second) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::string FixtureDictionaryProvider::Rephrase(std::string_view sentence) {
  if (auto it = rephrasings_.find(std::string(sentence)); it != rephrasings_.end()) {
    return it->second;
  }
  if (rephrase_prefix_) return *rephrase_prefix_ + std::string(sentence);
  throw ProviderError("no rephrasing recorded for sentence: " +
                      std::string(sentence.substr(0, 80)));
}

std::string LlmTextProvider::SynonymPrompt(std::string_view token, std::string_view context,
                                           int max_synonyms) {
  return "Give up to " + std::to_string(max_synonyms) + " synonyms for the word \"" +
         std::string(token) + "\" as it is used in this sentence:\n\n" +
         std::string(context) +
         "\n\nAnswer with a comma-separated list of replacement words only.";
}

std::string LlmTextProvider::RephrasePrompt(std::string_view sentence) {
  return "Rephrase the following sentence without changing its meaning:\n\n" +
         std::string(sentence) + "\n\nAnswer with the rephrased sentence only.";
}

std::vector<std::string> LlmTextProvider::ParseSynonymAnswer(std::string_view answer,
                                                             std::string_view token) {
  std::vector<std::string> out;
  std::set<std::string> seen{Lower(std::string(token))};
  size_t pos = 0;
  while (pos <= answer.size()) {
    size_t end = answer.find_first_of(",\n;", pos);
    if (end == std::string_view::npos) end = answer.size();
    std::string item = Trim(answer.substr(pos, end - pos), " \t\r\"'`.*-");
    // Drop list numbering such as "1." or "2)".
    const size_t digits = item.find_first_not_of("0123456789");
    if (digits != std::string::npos && digits > 0 &&
        (item[digits] == '.' || item[digits] == ')')) {
      item = Trim(item.substr(digits + 1), " \t\"'`");
    }
    if (!item.empty() && seen.insert(Lower(item)).second) out.push_back(item);
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> LlmTextProvider::Synonyms(std::string_view token,
                                                   std::string_view sentence_context) {
  try {
    const auto responses =
        backend_->Complete(SynonymPrompt(token, sentence_context, max_synonyms_), 1);
    if (responses.empty()) throw ProviderError("backend returned no answer");
    return ParseSynonymAnswer(responses.front(), token);
  } catch (const ProviderError&) {
    throw;
  } catch (const Error& e) {
    throw ProviderError(std::string("synonym request failed: ") + e.what());
  }
}

std::string LlmTextProvider::Rephrase(std::string_view sentence) {
  try {
    const auto responses = backend_->Complete(RephrasePrompt(sentence), 1);
    if (responses.empty()) throw ProviderError("backend returned no answer");
    std::string out = Trim(responses.front(), " \t\r\n\"");
    if (out.empty()) throw ProviderError("backend returned an empty rephrasing");
    return out;
  } catch (const ProviderError&) {
    throw;
  } catch (const Error& e) {
    throw ProviderError(std::string("rephrase request failed: ") + e.what());
  }
}

std::unique_ptr<TextProvider> MakeTextProvider(const json& config,
                                               const std::filesystem::path& base_dir) {
  const std::string kind = config.value("kind", "fixture_dictionary");
  if (kind == "fixture_dictionary") {
    if (config.contains("dictionary")) {
      return FixtureDictionaryProvider::FromJson(config.at("dictionary"));
    }
    if (!config.contains("path")) {
      throw ProviderError("fixture_dictionary provider needs 'path' or 'dictionary'");
    }
    std::filesystem::path path = config.at("path").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    return FixtureDictionaryProvider::FromJson(json::parse(ReadFile(path)));
  }
  if (kind == "llm_backend") {
    if (!config.contains("backend")) {
      throw ProviderError("llm_backend provider needs a 'backend' object");
    }
    auto backend = genclient::MakeBackend(
        genclient::BackendConfigFromJson("provider", config.at("backend"), base_dir));
    return std::make_unique<LlmTextProvider>(std::move(backend),
                                             config.value("max_synonyms", 6));
  }
  throw ProviderError("unknown text provider kind '" + kind + "'");
}

}  // namespace perturbkit::perturb
