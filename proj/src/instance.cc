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

#include "rpdhg/instance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "rpdhg/error.h"
#include "rpdhg/kernels.h"
#include "rpdhg/linalg.h"
#include "rpdhg/rng.h"

namespace rpdhg {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

std::string Normalized(std::string_view name) {
  std::string out(name);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

[[noreturn]] void Invalid(const std::string& what) {
  Fail(ErrorKind::kValidation, "invalid instance: " + what);
}

}  // namespace

std::string_view MatrixKindName(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::kGaussian:
      return "gaussian";
    case MatrixKind::kRademacher:
      return "rademacher";
    case MatrixKind::kUniformUnitVar:
      return "uniform_unit_var";
  }
  return "unknown";
}

std::string_view SolutionKindName(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::kFoldedGaussian:
      return "folded_gaussian";
    case SolutionKind::kFixedVector:
      return "fixed_vector";
    case SolutionKind::kDisparityLevel:
      return "disparity_level";
  }
  return "unknown";
}

MatrixKind ParseMatrixKind(std::string_view name) {
  const std::string key = Normalized(name);
  for (MatrixKind k : {MatrixKind::kGaussian, MatrixKind::kRademacher,
                       MatrixKind::kUniformUnitVar}) {
    if (key == MatrixKindName(k)) return k;
  }
  if (key == "uniform") return MatrixKind::kUniformUnitVar;
  Fail(ErrorKind::kArgument, "unknown matrix distribution '" + key + "'");
}

SolutionKind ParseSolutionKind(std::string_view name) {
  const std::string key = Normalized(name);
  for (SolutionKind k : {SolutionKind::kFoldedGaussian, SolutionKind::kFixedVector,
                         SolutionKind::kDisparityLevel}) {
    if (key == SolutionKindName(k)) return k;
  }
  if (key == "fixed") return SolutionKind::kFixedVector;
  if (key == "disparity") return SolutionKind::kDisparityLevel;
  Fail(ErrorKind::kArgument, "unknown solution distribution '" + key + "'");
}

std::vector<std::size_t> LpInstance::nonbasis() const {
  std::vector<bool> in_basis(n, false);
  for (std::size_t j : basis) in_basis[j] = true;
  std::vector<std::size_t> out;
  out.reserve(n - basis.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (!in_basis[j]) out.push_back(j);
  }
  return out;
}

std::uint64_t MatrixSeed(std::uint64_t instance_seed) {
  return MixSeed(instance_seed, {0});
}

std::uint64_t SolutionSeed(std::uint64_t instance_seed) {
  return MixSeed(instance_seed, {1});
}

DenseMatrix sample_matrix(std::size_t m, std::size_t n,
                          const MatrixDistribution& dist, std::uint64_t seed) {
  Require(m >= 1 && m < n, "sample_matrix: requires 1 <= m < n");
  return sample_random_matrix(m, n, dist, seed);
}

DenseMatrix sample_random_matrix(std::size_t rows, std::size_t cols,
                                 const MatrixDistribution& dist, std::uint64_t seed) {
  Require(rows >= 1 && cols >= 1, "sample_random_matrix: empty shape");
  Rng rng(seed);
  std::vector<double> entries(rows * cols);
  switch (dist.kind) {
    case MatrixKind::kGaussian:
      for (double& v : entries) v = rng.Gaussian();
      break;
    case MatrixKind::kRademacher:
      for (double& v : entries) v = rng.Rademacher();
      break;
    case MatrixKind::kUniformUnitVar:
      for (double& v : entries) v = kSqrt3 * (2.0 * rng.Uniform01() - 1.0);
      break;
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

Vector disparity_vector(std::size_t m, int level) {
  Require(level >= 0, "disparity level must be nonnegative");
  Vector u(m, 1.0);
  const double small = std::ldexp(1.0, -2 * level);  // 4^-l
  std::fill(u.begin(), u.begin() + m / 2, small);
  return u;
}

double disparity_phi(std::size_t m, int level) {
  Require(m >= 1, "disparity_phi: m must be positive");
  Require(level >= 0, "disparity level must be nonnegative");
  const double frac = static_cast<double>(m / 2) / static_cast<double>(m);
  return frac * std::ldexp(1.0, -2 * level) +
         (1.0 - frac) * std::ldexp(1.0, 2 * level);
}

SolutionPair sample_solution(std::size_t m, std::size_t d,
                             const SolutionDistribution& dist,
                             std::uint64_t seed) {
  const std::size_t n = m + d;
  Vector u(n);
  switch (dist.kind) {
    case SolutionKind::kFoldedGaussian: {
      Rng rng(seed);
      for (double& v : u) v = std::fabs(rng.Gaussian());
      break;
    }
    case SolutionKind::kFixedVector:
      Require(dist.fixed_values.size() == n,
              "sample_solution: fixed_values must have length m + d = " +
                  std::to_string(n));
      for (double v : dist.fixed_values) {
        Require(std::isfinite(v) && v >= 0.0,
                "sample_solution: fixed_values must be finite and nonnegative");
      }
      u = dist.fixed_values;
      break;
    case SolutionKind::kDisparityLevel: {
      Require(d == m, "sample_solution: the disparity family requires d = m");
      const Vector ul = disparity_vector(m, dist.level);
      std::copy(ul.begin(), ul.end(), u.begin());
      std::copy(ul.begin(), ul.end(), u.begin() + m);
      break;
    }
  }
  SolutionPair out{Vector(n, 0.0), Vector(n, 0.0)};
  std::copy(u.begin(), u.begin() + m, out.x_hat.begin());
  std::copy(u.begin() + m, u.end(), out.s_hat.begin() + m);
  return out;
}

LpInstance assemble(DenseMatrix a, const Vector& x_hat, const Vector& s_hat,
                    const AssembleOptions& options, std::uint64_t seed) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Require(m >= 1 && m < n, "assemble: requires 1 <= m < n");
  Require(x_hat.size() == n && s_hat.size() == n,
          "assemble: x_hat and s_hat must have length n");
  for (std::size_t i = 0; i < n; ++i) {
    Require(x_hat[i] >= 0.0 && s_hat[i] >= 0.0,
            "assemble: planted solutions must be nonnegative");
    Require(x_hat[i] * s_hat[i] == 0.0,
            "assemble: x_hat and s_hat must have disjoint supports");
    Require(i < m || x_hat[i] == 0.0, "assemble: x_hat must vanish beyond m");
    Require(i >= m || s_hat[i] == 0.0,
            "assemble: s_hat must vanish on the first m entries");
  }

  LpInstance inst;
  inst.m = m;
  inst.n = n;
  inst.seed = seed;
  inst.basis.resize(m);
  std::iota(inst.basis.begin(), inst.basis.end(), std::size_t{0});

  Certificate& cert = inst.meta.certificate;
  const std::vector<double> sigma =
      SingularValues(a.SelectColumns(inst.basis));
  cert.sigma_max_basis = sigma.front();
  cert.sigma_min_basis = sigma.back();
  cert.full_rank_basis =
      cert.sigma_min_basis > kCertificationThreshold * cert.sigma_max_basis;
  if (!cert.full_rank_basis) {
    std::ostringstream msg;
    msg << "assemble: basis matrix is numerically singular (sigma_min = "
        << cert.sigma_min_basis << ", sigma_max = " << cert.sigma_max_basis
        << ", seed = " << seed << ")";
    Fail(ErrorKind::kCertificationFailed, msg.str());
  }
  double min_u = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) min_u = std::min(min_u, x_hat[i] + s_hat[i]);
  cert.min_u = min_u;
  cert.strictly_complementary = min_u > 0.0;

  inst.b = matvec(a, x_hat);
  inst.x_star = x_hat;
  inst.s_star = s_hat;
  if (options.presolve) {
    PresolveResult pre = min_norm_presolve(a, s_hat, options.presolve_rel_tol);
    inst.c = std::move(pre.c_bar);
    inst.y_star = std::move(pre.y_hat);
    inst.presolved = true;
  } else {
    inst.c = s_hat;
    inst.y_star.assign(m, 0.0);
  }
  inst.a = std::move(a);
  return inst;
}

DisparityInstance gen_disparity(std::size_t m, int level,
                                const MatrixDistribution& dist,
                                std::uint64_t seed, bool presolve) {
  Require(m >= 2, "gen_disparity: requires m >= 2");
  GeneratorSpec spec;
  spec.m = m;
  spec.n = 2 * m;
  spec.matrix = dist;
  spec.solution.kind = SolutionKind::kDisparityLevel;
  spec.solution.level = level;
  spec.seed = seed;
  spec.presolve = presolve;
  return {generate_instance(spec), disparity_phi(m, level)};
}

LpInstance generate_instance(const GeneratorSpec& spec) {
  DenseMatrix a = sample_matrix(spec.m, spec.n, spec.matrix, MatrixSeed(spec.seed));
  const SolutionPair sol =
      sample_solution(spec.m, spec.n - spec.m, spec.solution, SolutionSeed(spec.seed));
  AssembleOptions options;
  options.presolve = spec.presolve;
  LpInstance inst = assemble(std::move(a), sol.x_hat, sol.s_hat, options, spec.seed);
  inst.meta.matrix = spec.matrix;
  inst.meta.solution = spec.solution;
  if (spec.shuffle) inst = shuffle_variables(inst, MixSeed(spec.seed, {2}));
  return inst;
}

LpInstance shuffle_variables(const LpInstance& inst, std::uint64_t seed) {
  const std::size_t n = inst.n;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.Below(i)]);
  }
  LpInstance out = inst;
  out.a = inst.a.SelectColumns(perm);
  std::vector<bool> in_basis(n, false);
  for (std::size_t j : inst.basis) in_basis[j] = true;
  out.basis.clear();
  for (std::size_t j = 0; j < n; ++j) {
    out.c[j] = inst.c[perm[j]];
    out.x_star[j] = inst.x_star[perm[j]];
    out.s_star[j] = inst.s_star[perm[j]];
    if (in_basis[perm[j]]) out.basis.push_back(j);
  }
  out.meta.shuffled = true;
  out.meta.shuffle_seed = seed;
  return out;
}

void validate_instance(const LpInstance& inst) {
  const std::size_t m = inst.m;
  const std::size_t n = inst.n;
  if (!(m >= 1 && n > m)) Invalid("requires 1 <= m < n");
  if (inst.a.rows() != m || inst.a.cols() != n) Invalid("A has wrong shape");
  if (!inst.a.AllFinite()) Invalid("A has non-finite entries");
  if (inst.b.size() != m || inst.y_star.size() != m) {
    Invalid("b and y_star must have length m");
  }
  if (inst.c.size() != n || inst.x_star.size() != n || inst.s_star.size() != n) {
    Invalid("c, x_star and s_star must have length n");
  }
  if (inst.basis.size() != m) Invalid("basis must have m entries");
  for (std::size_t k = 0; k < m; ++k) {
    if (inst.basis[k] >= n) Invalid("basis index out of range");
    if (k > 0 && inst.basis[k] <= inst.basis[k - 1]) {
      Invalid("basis must be strictly ascending");
    }
  }
  std::vector<bool> in_basis(n, false);
  for (std::size_t j : inst.basis) in_basis[j] = true;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = inst.x_star[j];
    const double sj = inst.s_star[j];
    if (!(xj >= 0.0) || !(sj >= 0.0) || !std::isfinite(xj) || !std::isfinite(sj)) {
      Invalid("x_star and s_star must be finite and nonnegative");
    }
    if (xj * sj != 0.0) Invalid("x_star and s_star are not complementary");
    if (xj != 0.0 && !in_basis[j]) Invalid("support(x_star) leaves the basis");
    if (sj != 0.0 && in_basis[j]) Invalid("support(s_star) meets the basis");
  }
  const double norm_a = inst.a.FrobeniusNorm();
  Vector ax = matvec(inst.a, inst.x_star);
  for (std::size_t i = 0; i < m; ++i) ax[i] -= inst.b[i];
  if (Norm2(ax) > 1e-12 * (1.0 + norm_a * Norm2(inst.x_star))) {
    Invalid("primal residual ||A x_star - b|| exceeds tolerance");
  }
  Vector dual = matvec_t(inst.a, inst.y_star);
  for (std::size_t j = 0; j < n; ++j) dual[j] += inst.s_star[j] - inst.c[j];
  if (Norm2(dual) > 1e-10 * (1.0 + Norm2(inst.c))) {
    Invalid("dual residual ||A^T y_star + s_star - c|| exceeds tolerance");
  }
  if (inst.presolved) {
    if (Norm2(matvec(inst.a, inst.c)) > 1e-8 * norm_a * (1.0 + Norm2(inst.c))) {
      Invalid("presolved objective violates A c = 0");
    }
  }
}

}  // namespace rpdhg
