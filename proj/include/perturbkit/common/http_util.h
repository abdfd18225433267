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

#ifndef PERTURBKIT_COMMON_HTTP_UTIL_H_
#define PERTURBKIT_COMMON_HTTP_UTIL_H_

#include <string>
#include <utility>
#include <vector>

namespace perturbkit {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// POSTs `body` to an absolute http:// or https:// URL. Throws IoError on
// transport failure; HTTP error statuses are returned, not thrown.
HttpResponse HttpPost(const std::string& url, const std::string& body,
                      const std::string& content_type,
                      const std::vector<std::pair<std::string, std::string>>& headers,
                      double timeout_seconds);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_HTTP_UTIL_H_
