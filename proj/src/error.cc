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

#include "rpdhg/error.h"

namespace rpdhg {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kDegenerateMatrix: return "degenerate-matrix";
    case ErrorKind::kSingularMatrix: return "singular-matrix";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kCertificationFailed: return "certification-failed";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kNumericalDivergence: return "numerical-divergence";
    case ErrorKind::kUnsolvedRun: return "unsolved-run";
    case ErrorKind::kInfeasible: return "infeasible";
  }
  return "unknown";
}

}  // namespace rpdhg
