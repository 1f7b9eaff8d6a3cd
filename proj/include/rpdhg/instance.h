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

#ifndef RPDHG_INSTANCE_H_
#define RPDHG_INSTANCE_H_

// Random standard-form LPs  min c^T x  s.t.  A x = b, x >= 0  built from a
// sub-Gaussian constraint matrix and a planted primal-dual pair
//   x_hat = (u1, 0_d),  s_hat = (0_m, u2),  b = A x_hat,  c = s_hat
// so the optimum is known in closed form. With `presolve`, c is replaced by
// the minimum-norm objective c_bar = s_hat + A^T y_hat (A c_bar = 0), and the
// dual optimum becomes y_star = y_hat.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpdhg/dense_matrix.h"

namespace rpdhg {

enum class MatrixKind { kGaussian, kRademacher, kUniformUnitVar };

// i.i.d. mean-zero unit-variance entries. `sigma_a` is the sub-Gaussian
// parameter; informational only (all three shipped laws have sigma_a = 1).
struct MatrixDistribution {
  MatrixKind kind = MatrixKind::kGaussian;
  double sigma_a = 1.0;

  friend bool operator==(const MatrixDistribution&,
                         const MatrixDistribution&) = default;
};

enum class SolutionKind { kFoldedGaussian, kFixedVector, kDisparityLevel };

struct SolutionDistribution {
  SolutionKind kind = SolutionKind::kFoldedGaussian;
  std::vector<double> fixed_values;  // kFixedVector: u, length m + d
  int level = 0;                     // kDisparityLevel: l >= 0

  friend bool operator==(const SolutionDistribution&,
                         const SolutionDistribution&) = default;
};

std::string_view MatrixKindName(MatrixKind kind);
std::string_view SolutionKindName(SolutionKind kind);
// Accepts the names above plus dashed spellings ("folded-gaussian").
MatrixKind ParseMatrixKind(std::string_view name);
SolutionKind ParseSolutionKind(std::string_view name);

// Uniqueness certificate: B = A[:, basis] has sigma_min(B) > 1e-10 sigma_max(B)
// and the planted u is strictly positive.
struct Certificate {
  bool full_rank_basis = false;
  bool strictly_complementary = false;
  double sigma_min_basis = 0.0;
  double sigma_max_basis = 0.0;
  double min_u = 0.0;

  bool certified() const { return full_rank_basis && strictly_complementary; }
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct InstanceMeta {
  MatrixDistribution matrix;
  SolutionDistribution solution;
  Certificate certificate;
  bool shuffled = false;
  std::uint64_t shuffle_seed = 0;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

struct LpInstance {
  std::size_t m = 0;
  std::size_t n = 0;
  DenseMatrix a;
  Vector b;
  Vector c;
  Vector x_star;
  Vector s_star;
  Vector y_star;
  std::vector<std::size_t> basis;  // 0-based, ascending
  std::uint64_t seed = 0;
  bool presolved = false;
  InstanceMeta meta;

  std::size_t d() const { return n - m; }
  std::vector<std::size_t> nonbasis() const;

  friend bool operator==(const LpInstance&, const LpInstance&) = default;
};

struct SolutionPair {
  Vector x_hat;
  Vector s_hat;
};

inline constexpr double kCertificationThreshold = 1e-10;

// m x n matrix with i.i.d. entries; requires 1 <= m < n.
DenseMatrix sample_matrix(std::size_t m, std::size_t n,
                          const MatrixDistribution& dist, std::uint64_t seed);
// Same entry law for any shape (the probes also draw square matrices).
DenseMatrix sample_random_matrix(std::size_t rows, std::size_t cols,
                                 const MatrixDistribution& dist, std::uint64_t seed);

// x_hat = (u1, 0_d), s_hat = (0_m, u2) with u = (u1, u2) drawn from `dist`.
SolutionPair sample_solution(std::size_t m, std::size_t d,
                             const SolutionDistribution& dist,
                             std::uint64_t seed);

// The disparity family vector u^l: floor(m/2) copies of 4^-l, then ones.
Vector disparity_vector(std::size_t m, int level);
// phi_l = floor(m/2)/m * 4^-l + (1 - floor(m/2)/m) * 4^l.
double disparity_phi(std::size_t m, int level);

struct AssembleOptions {
  bool presolve = false;
  double presolve_rel_tol = 1e-10;
};

// Builds the LP from A and the planted pair. Throws kArgument on shape or
// support errors and kCertificationFailed when B is numerically singular.
// A non-positive u component is recorded in the certificate, not thrown.
LpInstance assemble(DenseMatrix a, const Vector& x_hat, const Vector& s_hat,
                    const AssembleOptions& options, std::uint64_t seed);

struct DisparityInstance {
  LpInstance instance;
  double phi_l = 0.0;
};

// n = 2m instance with u = (u^l, u^l).
DisparityInstance gen_disparity(std::size_t m, int level,
                                const MatrixDistribution& dist,
                                std::uint64_t seed, bool presolve);

struct GeneratorSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  MatrixDistribution matrix;
  SolutionDistribution solution;
  std::uint64_t seed = 0;
  bool presolve = false;
  // Permute variables (and the recorded basis) after assembly.
  bool shuffle = false;
};

// sample_matrix + sample_solution + assemble with seeds derived from
// spec.seed, then an optional shuffle. For kDisparityLevel, n must be 2m.
LpInstance generate_instance(const GeneratorSpec& spec);

// Applies one random permutation to the columns of A, to c, x*, s* and to
// the stored basis.
LpInstance shuffle_variables(const LpInstance& inst, std::uint64_t seed);

// Checks every LpInstance invariant; throws kValidation naming the first
// violated one.
void validate_instance(const LpInstance& inst);

// Seeds of the matrix and solution streams used by generate_instance.
std::uint64_t MatrixSeed(std::uint64_t instance_seed);
std::uint64_t SolutionSeed(std::uint64_t instance_seed);

}  // namespace rpdhg

#endif  // RPDHG_INSTANCE_H_
