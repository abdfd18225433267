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

#ifndef PERTURBKIT_GENCLIENT_CODEGEN_H_
#define PERTURBKIT_GENCLIENT_CODEGEN_H_

#include <string>
#include <string_view>
#include <vector>

namespace perturbkit::genclient {

// Wraps an assignment statement in the code-generation instruction:
//
//   Write a Python program that does the following:
//
//   <problem_text>
//
//   Please omit any explanations of the code.
std::string BuildCodegenPrompt(std::string_view problem_text);

// Pulls code out of a model response. Markdown fences (``` with an optional
// language tag) take precedence, then [PYTHON]...[/PYTHON] markers, then
// ''' fences on their own unindented lines. All blocks of the winning kind
// are joined with '\n'. Text without markers is returned unchanged. The
// result is a fixed point: ExtractCode(ExtractCode(r)) == ExtractCode(r).
std::string ExtractCode(std::string_view raw_response);

std::vector<std::string> DefaultRefusalPhrases();

// Case-insensitive substring match against `phrases`.
bool LooksLikeRefusal(std::string_view raw_response,
                      const std::vector<std::string>& phrases);

}  // namespace perturbkit::genclient

#endif  // PERTURBKIT_GENCLIENT_CODEGEN_H_
