// Copyright 2026 The rpdhg-lab Authors
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

#ifndef RPDHG_ERROR_H_
#define RPDHG_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rpdhg {

enum class ErrorKind {
  kArgument,
  kDegenerateMatrix,
  kSingularMatrix,
  kConvergence,
  kCertificationFailed,
  kParse,
  kValidation,
  kNumericalDivergence,
  kUnsolvedRun,
  kInfeasible,
};

const char* ErrorKindName(ErrorKind kind);

// All library failures are reported through this type; `kind()` tells the
// caller which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the solver when an iterate stops being finite or blows up.
class DivergenceError : public Error {
 public:
  DivergenceError(std::int64_t iteration, const std::string& what)
      : Error(ErrorKind::kNumericalDivergence, what), iteration_(iteration) {}

  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorKind::kArgument, what);
}

}  // namespace rpdhg

#endif  // RPDHG_ERROR_H_
