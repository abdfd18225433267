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

#ifndef PERTURBKIT_COMMON_PARALLEL_H_
#define PERTURBKIT_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace perturbkit {

// Runs fn(0) .. fn(n - 1) on at most `workers` threads. Callers write results
// into per-index slots, so output order never depends on scheduling. If any
// call throws, the exception from the lowest failing index is rethrown after
// all workers finish.
void ParallelFor(size_t n, size_t workers, const std::function<void(size_t)>& fn);

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_PARALLEL_H_
