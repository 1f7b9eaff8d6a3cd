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

#ifndef RPDHG_METRICS_H_
#define RPDHG_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "rpdhg/dense_matrix.h"
#include "rpdhg/instance.h"
#include "rpdhg/solver.h"

namespace rpdhg {

// Stage I runs until the support of x settles on the optimal basis for good;
// Stage II is the rest of the run up to the distance tolerance.
struct StageDecomposition {
  std::int64_t t_basis = 0;
  std::int64_t t_local = 0;
  std::int64_t t_total = 0;
  bool settled = false;
};

// T_total is the first sampled iteration with dist <= dist_tol. T_basis is the
// smallest recorded t such that every recorded support in [t, T_total] equals
// the basis; when no such t exists, T_basis = T_total and settled = false.
// Traces may be full or change-point encoded. Throws kUnsolvedRun when the
// distance never reaches dist_tol.
StageDecomposition detect_stages(std::span<const SupportSnapshot> support_trace,
                                 std::span<const DistSample> dist_trace,
                                 std::span<const std::size_t> basis,
                                 double dist_tol);

// Same rule on a precomputed on/off-basis trace.
StageDecomposition detect_stages(std::span<const BasisTracePoint> basis_trace,
                                 std::int64_t t_total);

struct ConditionReport {
  std::size_t m = 0;
  std::size_t n = 0;
  double kappa = 0.0;       // sigma_1(A) / sigma_m(A)
  double Phi = 0.0;         // tableau condition measure; +inf if not unique
  double phi = 0.0;         // mean(x* + s*) / min(x* + s*)
  double phi_raw = 0.0;     // ||x* + s*||_1 / min(x* + s*) = n * phi
  double min_xs = 0.0;      // min_i (x*_i + s*_i)
  double norm_binv_times_norm_a = 0.0;  // ||B^-1|| ||A||
  double norm_binv_a = 0.0;             // ||B^-1 A||
  double lemma7_bound = 0.0;            // phi_raw * ||B^-1 A||
  double z_p = 0.0;  // max_j sqrt(||(B^-1 N)_{:,j}||^2 + 1)
  double z_d = 0.0;  // max_i sqrt(||(B^-1 N)_{i,:}||^2 + 1)
  double sigma_max_a = 0.0;
  double sigma_min_a = 0.0;
  double sigma_min_b = 0.0;
  bool unique_optimum = false;
};

// B^-1 N for the instance's basis/nonbasis split. Throws kSingularMatrix.
DenseMatrix simplex_tableau(const LpInstance& inst);

// Never throws for a singular basis: Phi, Z_p, Z_d and the B-dependent norms
// become +inf and the remaining fields are still filled in.
ConditionReport condition_report(const LpInstance& inst);

// Phi <= (1 + 1e-9) * min(phi_raw ||B^-1 A||, phi_raw max(Z_p, Z_d)).
// Vacuously true when Phi is infinite.
bool verify_bound_chain(const ConditionReport& report);

}  // namespace rpdhg

#endif  // RPDHG_METRICS_H_
