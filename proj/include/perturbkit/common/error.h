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

#ifndef PERTURBKIT_COMMON_ERROR_H_
#define PERTURBKIT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace perturbkit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a mathematical operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A precondition on the inputs of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace perturbkit

#endif  // PERTURBKIT_COMMON_ERROR_H_
