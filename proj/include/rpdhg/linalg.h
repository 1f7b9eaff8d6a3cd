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

#ifndef RPDHG_LINALG_H_
#define RPDHG_LINALG_H_

#include <span>
#include <vector>

#include "rpdhg/dense_matrix.h"

namespace rpdhg {

// Largest and smallest nonzero singular values of a wide matrix.
struct SpectralExtremes {
  double sigma_max = 0.0;
  double sigma_min_nonzero = 0.0;
  int iterations_used = 0;  // power iterations spent on sigma_max
};

// Singular values below this fraction of sigma_max are treated as zero.
inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kDefaultSpectralRelTol = 1e-6;

// A x and A^T y through the active SIMD kernel table.
Vector matvec(const DenseMatrix& a, std::span<const double> x);
Vector matvec_t(const DenseMatrix& a, std::span<const double> y);

// All min(rows, cols) singular values, descending. One-sided (Hestenes)
// cyclic Jacobi: rotations diagonalize the Gram matrix of the shorter side
// without forming it, so small singular values keep eps * sigma_max accuracy.
std::vector<double> SingularValues(const DenseMatrix& a);

// sigma_1(A) by power iteration on the smaller Gram matrix, stopping once
// successive Rayleigh quotients differ by less than rel_tol^2 (relative).
double PowerIterationSigmaMax(const DenseMatrix& a, double rel_tol,
                              int* iterations = nullptr);

// Requires rows <= cols and rel_tol in (0, 1e-2]. sigma_max comes from power
// iteration, sigma_min_nonzero from the Jacobi decomposition of A A^T.
// Throws kDegenerateMatrix when no singular value clears the rank threshold.
SpectralExtremes spectral_extremes(const DenseMatrix& a,
                                   double rel_tol = kDefaultSpectralRelTol);

// LU with partial (row) pivoting of a square matrix.
class LuFactorization {
 public:
  // Throws kSingularMatrix when a pivot falls below 1e-12 * ||B||_F.
  explicit LuFactorization(const DenseMatrix& b);

  std::size_t size() const { return lu_.rows(); }
  // Solves B X = rhs column by column.
  DenseMatrix Solve(const DenseMatrix& rhs) const;
  Vector Solve(std::span<const double> rhs) const;
  // Solves B^T z = rhs.
  Vector SolveTransposed(std::span<const double> rhs) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;  // row perm_[i] of B is row i of LU
};

DenseMatrix lu_solve(const DenseMatrix& b, const DenseMatrix& rhs);

struct PresolveResult {
  Vector y_hat;
  Vector c_bar;
  int cg_iterations = 0;
};

inline constexpr double kDefaultPresolveRelTol = 1e-10;

// Minimum-norm objective: y_hat = argmin_y ||s + A^T y|| via conjugate
// gradients on A A^T y = -A s, and c_bar = s + A^T y_hat (so A c_bar ~ 0).
// Throws kConvergence if CG misses rel_tol within 10 m iterations.
PresolveResult min_norm_presolve(const DenseMatrix& a, std::span<const double> s,
                                 double rel_tol = kDefaultPresolveRelTol);

}  // namespace rpdhg

#endif  // RPDHG_LINALG_H_
