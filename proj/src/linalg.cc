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

#include "rpdhg/linalg.h"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rpdhg/error.h"
#include "rpdhg/kernels.h"
#include "rpdhg/rng.h"

namespace rpdhg {
namespace {

constexpr std::uint64_t kPowerIterationSeed = 0x9d2c5680u;
constexpr int kMaxPowerIterations = 20000;
constexpr int kMaxJacobiSweeps = 60;
constexpr double kPivotThreshold = 1e-12;

void Normalize(Vector& v) {
  const double norm = Norm2(v);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
}

}  // namespace

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  Require(x.size() == a.cols(), "matvec: expected vector of length " +
                                    std::to_string(a.cols()) + ", got " +
                                    std::to_string(x.size()));
  Vector out(a.rows());
  kernels::Active().gemv(a.data(), a.rows(), a.cols(), x.data(), out.data());
  return out;
}

Vector matvec_t(const DenseMatrix& a, std::span<const double> y) {
  Require(y.size() == a.rows(), "matvec_t: expected vector of length " +
                                    std::to_string(a.rows()) + ", got " +
                                    std::to_string(y.size()));
  Vector out(a.cols());
  kernels::Active().gemv_t(a.data(), a.rows(), a.cols(), y.data(), out.data());
  return out;
}

std::vector<double> SingularValues(const DenseMatrix& a) {
  const DenseMatrix* source = &a;
  DenseMatrix transposed;
  if (a.rows() > a.cols()) {
    transposed = a.Transposed();
    source = &transposed;
  }
  DenseMatrix u = *source;
  const std::size_t m = u.rows();
  const std::size_t len = u.cols();
  const auto& k = kernels::Active();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double* up = u.row(p).data();
        double* uq = u.row(q).data();
        const double alpha = k.dot(up, up, len);
        const double beta = k.dot(uq, uq, len);
        const double gamma = k.dot(up, uq, len);
        if (std::fabs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rutishauser's stable rotation angle.
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t j = 0; j < len; ++j) {
          const double vp = up[j];
          const double vq = uq[j];
          up[j] = c * vp - s * vq;
          uq[j] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sigma(m);
  for (std::size_t i = 0; i < m; ++i) sigma[i] = Norm2(u.row(i));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double PowerIterationSigmaMax(const DenseMatrix& a, double rel_tol,
                              int* iterations) {
  const bool wide = a.rows() <= a.cols();
  const std::size_t dim = wide ? a.rows() : a.cols();
  if (dim == 0) return 0.0;
  const auto& k = kernels::Active();
  Rng rng(kPowerIterationSeed);
  Vector v(dim);
  for (double& x : v) x = rng.Gaussian();
  Normalize(v);
  Vector inner(wide ? a.cols() : a.rows());
  Vector w(dim);
  // The quotient cannot resolve changes below a few ulps.
  const double threshold =
      std::max(rel_tol * rel_tol, 4 * std::numeric_limits<double>::epsilon());
  double quotient = 0.0;
  int it = 0;
  for (; it < kMaxPowerIterations; ++it) {
    if (wide) {
      k.gemv_t(a.data(), a.rows(), a.cols(), v.data(), inner.data());
      k.gemv(a.data(), a.rows(), a.cols(), inner.data(), w.data());
    } else {
      k.gemv(a.data(), a.rows(), a.cols(), v.data(), inner.data());
      k.gemv_t(a.data(), a.rows(), a.cols(), inner.data(), w.data());
    }
    const double next = k.dot(v.data(), w.data(), dim);
    v.swap(w);
    Normalize(v);
    if (next <= 0.0) {
      quotient = 0.0;
      ++it;
      break;
    }
    const bool converged = it > 0 && std::fabs(next - quotient) < threshold * next;
    quotient = next;
    if (converged) {
      ++it;
      break;
    }
  }
  if (iterations != nullptr) *iterations = it;
  return std::sqrt(std::max(quotient, 0.0));
}

SpectralExtremes spectral_extremes(const DenseMatrix& a, double rel_tol) {
  Require(a.rows() <= a.cols(), "spectral_extremes: requires rows <= cols");
  Require(rel_tol > 0.0 && rel_tol <= 1e-2,
          "spectral_extremes: rel_tol must lie in (0, 1e-2]");
  SpectralExtremes out;
  out.sigma_max = PowerIterationSigmaMax(a, rel_tol, &out.iterations_used);
  const std::vector<double> sigma = SingularValues(a);
  if (!sigma.empty()) out.sigma_max = std::max(out.sigma_max, sigma.front());
  if (!(out.sigma_max > 0.0)) {
    Fail(ErrorKind::kDegenerateMatrix, "spectral_extremes: matrix is zero");
  }
  const double threshold = kRankThreshold * out.sigma_max;
  out.sigma_min_nonzero = 0.0;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) {
    if (*it > threshold) {
      out.sigma_min_nonzero = std::min(*it, out.sigma_max);
      break;
    }
  }
  if (out.sigma_min_nonzero == 0.0) {
    Fail(ErrorKind::kDegenerateMatrix,
         "spectral_extremes: no singular value above rank threshold");
  }
  return out;
}

LuFactorization::LuFactorization(const DenseMatrix& b) : lu_(b) {
  Require(b.rows() == b.cols(), "lu_solve: matrix must be square");
  const std::size_t n = b.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  const double tiny = kPivotThreshold * b.FrobeniusNorm();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(lu_(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best > tiny)) {
      Fail(ErrorKind::kSingularMatrix,
           "lu_solve: pivot " + std::to_string(best) + " in column " +
               std::to_string(col) + " below threshold");
    }
    if (pivot != col) {
      std::swap_ranges(lu_.row(col).begin(), lu_.row(col).end(),
                       lu_.row(pivot).begin());
      std::swap(perm_[col], perm_[pivot]);
    }
    const double diag = lu_(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = lu_(r, col) / diag;
      lu_(r, col) = factor;
      if (factor == 0.0) continue;
      for (std::size_t c = col + 1; c < n; ++c) lu_(r, c) -= factor * lu_(col, c);
    }
  }
}

Vector LuFactorization::Solve(std::span<const double> rhs) const {
  const std::size_t n = size();
  Require(rhs.size() == n, "lu_solve: rhs length mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) v -= lu_(i, j) * x[j];
    x[i] = v;
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = x[i];
    for (std::size_t j = i + 1; j < n; ++j) v -= lu_(i, j) * x[j];
    x[i] = v / lu_(i, i);
  }
  return x;
}

DenseMatrix LuFactorization::Solve(const DenseMatrix& rhs) const {
  Require(rhs.rows() == size(), "lu_solve: rhs rows must equal B rows");
  DenseMatrix out(rhs.rows(), rhs.cols());
  Vector column(rhs.rows());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < rhs.rows(); ++i) column[i] = rhs(i, j);
    const Vector x = Solve(column);
    for (std::size_t i = 0; i < rhs.rows(); ++i) out(i, j) = x[i];
  }
  return out;
}

Vector LuFactorization::SolveTransposed(std::span<const double> rhs) const {
  const std::size_t n = size();
  Require(rhs.size() == n, "lu_solve: rhs length mismatch");
  // P B = L U, so B^T = U^T L^T P.
  Vector w(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double v = w[i];
    for (std::size_t j = 0; j < i; ++j) v -= lu_(j, i) * w[j];
    w[i] = v / lu_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = w[i];
    for (std::size_t j = i + 1; j < n; ++j) v -= lu_(j, i) * w[j];
    w[i] = v;
  }
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[perm_[i]] = w[i];
  return z;
}

DenseMatrix lu_solve(const DenseMatrix& b, const DenseMatrix& rhs) {
  return LuFactorization(b).Solve(rhs);
}

PresolveResult min_norm_presolve(const DenseMatrix& a, std::span<const double> s,
                                 double rel_tol) {
  Require(s.size() == a.cols(), "min_norm_presolve: length of s must equal cols");
  Require(rel_tol > 0.0, "min_norm_presolve: rel_tol must be positive");
  const std::size_t m = a.rows();
  const auto& k = kernels::Active();
  PresolveResult out;
  out.y_hat.assign(m, 0.0);

  Vector rhs = matvec(a, s);
  for (double& v : rhs) v = -v;
  const double rhs_norm = Norm2(rhs);
  if (rhs_norm > 0.0) {
    Vector r = rhs;
    Vector p = r;
    Vector at_p(a.cols());
    Vector gram_p(m);
    double rr = k.dot(r.data(), r.data(), m);
    const int max_iterations = static_cast<int>(10 * m);
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
      k.gemv_t(a.data(), m, a.cols(), p.data(), at_p.data());
      k.gemv(a.data(), m, a.cols(), at_p.data(), gram_p.data());
      const double curvature = k.dot(p.data(), gram_p.data(), m);
      if (!(curvature > 0.0)) break;  // A is rank deficient along p
      const double alpha = rr / curvature;
      for (std::size_t i = 0; i < m; ++i) {
        out.y_hat[i] += alpha * p[i];
        r[i] -= alpha * gram_p[i];
      }
      out.cg_iterations = it + 1;
      const double rr_next = k.dot(r.data(), r.data(), m);
      if (std::sqrt(rr_next) <= rel_tol * rhs_norm) {
        converged = true;
        break;
      }
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
    }
    if (!converged) {
      Fail(ErrorKind::kConvergence,
           "min_norm_presolve: conjugate gradient did not reach rel_tol " +
               std::to_string(rel_tol) + " in " + std::to_string(max_iterations) +
               " iterations");
    }
  }
  out.c_bar = matvec_t(a, out.y_hat);
  for (std::size_t j = 0; j < out.c_bar.size(); ++j) out.c_bar[j] += s[j];
  return out;
}

}  // namespace rpdhg
