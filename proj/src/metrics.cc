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

#include "rpdhg/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rpdhg/error.h"
#include "rpdhg/linalg.h"

namespace rpdhg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundSlack = 1e-9;

}  // namespace

StageDecomposition detect_stages(std::span<const BasisTracePoint> basis_trace,
                                 std::int64_t t_total) {
  Require(!basis_trace.empty(), "detect_stages: empty trace");
  Require(t_total >= 0, "detect_stages: negative T_total");
  std::size_t end = 0;  // entries [0, end) have iter <= t_total
  while (end < basis_trace.size() && basis_trace[end].iter <= t_total) {
    if (end > 0) {
      Require(basis_trace[end].iter > basis_trace[end - 1].iter,
              "detect_stages: trace is not sorted by iteration");
    }
    ++end;
  }
  Require(end > 0, "detect_stages: no trace entry at or before T_total");

  StageDecomposition out;
  out.t_total = t_total;
  std::size_t last_off = end;
  for (std::size_t k = end; k-- > 0;) {
    if (!basis_trace[k].on_basis) {
      last_off = k;
      break;
    }
  }
  if (last_off == end) {
    out.t_basis = basis_trace[0].iter;
    out.settled = true;
  } else if (last_off + 1 < end) {
    out.t_basis = basis_trace[last_off + 1].iter;
    out.settled = true;
  } else {
    out.t_basis = t_total;
    out.settled = false;
  }
  out.t_local = t_total - out.t_basis;
  return out;
}

StageDecomposition detect_stages(std::span<const SupportSnapshot> support_trace,
                                 std::span<const DistSample> dist_trace,
                                 std::span<const std::size_t> basis,
                                 double dist_tol) {
  Require(!support_trace.empty() && !dist_trace.empty(), "detect_stages: empty trace");
  std::int64_t t_total = -1;
  for (const DistSample& s : dist_trace) {
    if (s.dist <= dist_tol) {
      t_total = s.iter;
      break;
    }
  }
  if (t_total < 0) {
    Fail(ErrorKind::kUnsolvedRun, "detect_stages: distance never reached dist_tol");
  }
  std::vector<std::size_t> sorted_basis(basis.begin(), basis.end());
  std::sort(sorted_basis.begin(), sorted_basis.end());
  std::vector<BasisTracePoint> on_off;
  on_off.reserve(support_trace.size());
  std::vector<std::size_t> support;
  for (const SupportSnapshot& snap : support_trace) {
    support = snap.support;
    std::sort(support.begin(), support.end());
    on_off.push_back({snap.iter, support == sorted_basis});
  }
  return detect_stages(on_off, t_total);
}

DenseMatrix simplex_tableau(const LpInstance& inst) {
  Require(inst.basis.size() == inst.m, "simplex_tableau: basis must have m entries");
  const DenseMatrix b = inst.a.SelectColumns(inst.basis);
  const std::vector<std::size_t> nonbasis = inst.nonbasis();
  const DenseMatrix n = inst.a.SelectColumns(nonbasis);
  return lu_solve(b, n);
}

ConditionReport condition_report(const LpInstance& inst) {
  Require(inst.a.rows() == inst.m && inst.a.cols() == inst.n,
          "condition_report: instance dimensions are inconsistent");
  Require(inst.x_star.size() == inst.n && inst.s_star.size() == inst.n,
          "condition_report: x_star and s_star must have length n");
  ConditionReport rep;
  rep.m = inst.m;
  rep.n = inst.n;

  const std::vector<double> sv = SingularValues(inst.a);
  rep.sigma_max_a = sv.front();
  rep.sigma_min_a = sv[inst.m - 1];
  rep.kappa = rep.sigma_min_a > 0.0 ? rep.sigma_max_a / rep.sigma_min_a : kInf;

  Vector u(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) u[j] = inst.x_star[j] + inst.s_star[j];
  rep.min_xs = *std::min_element(u.begin(), u.end());
  const double l1 = Norm1(u);
  if (rep.min_xs > 0.0) {
    rep.phi_raw = l1 / rep.min_xs;
    rep.phi = rep.phi_raw / static_cast<double>(inst.n);
  } else {
    rep.phi_raw = kInf;
    rep.phi = kInf;
  }

  rep.Phi = kInf;
  rep.z_p = kInf;
  rep.z_d = kInf;
  rep.norm_binv_times_norm_a = kInf;
  rep.norm_binv_a = kInf;
  rep.lemma7_bound = kInf;
  if (inst.basis.size() != inst.m) return rep;

  const DenseMatrix b = inst.a.SelectColumns(inst.basis);
  rep.sigma_min_b = SingularValues(b).back();
  DenseMatrix tableau;
  try {
    tableau = simplex_tableau(inst);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kSingularMatrix) throw;
    return rep;
  }
  if (rep.sigma_min_b > 0.0) rep.norm_binv_times_norm_a = rep.sigma_max_a / rep.sigma_min_b;

  const std::size_t m = inst.m;
  const std::size_t d = inst.n - inst.m;
  const std::vector<std::size_t> nonbasis = inst.nonbasis();
  Vector col2(d, 0.0);
  Vector row2(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double t = tableau(i, j);
      col2[j] += t * t;
      row2[i] += t * t;
    }
  }
  rep.z_p = 0.0;
  rep.z_d = 0.0;
  double col_term = 0.0;
  double row_term = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double z = std::sqrt(col2[j] + 1.0);
    rep.z_p = std::max(rep.z_p, z);
    col_term = std::max(col_term, z / inst.s_star[nonbasis[j]]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double z = std::sqrt(row2[i] + 1.0);
    rep.z_d = std::max(rep.z_d, z);
    row_term = std::max(row_term, z / inst.x_star[inst.basis[i]]);
  }

  // B^-1 A is [I | B^-1 N] up to a column permutation.
  DenseMatrix binv_a(m, inst.n);
  for (std::size_t i = 0; i < m; ++i) {
    binv_a(i, inst.basis[i]) = 1.0;
    for (std::size_t j = 0; j < d; ++j) binv_a(i, nonbasis[j]) = tableau(i, j);
  }
  rep.norm_binv_a = std::max(SingularValues(binv_a).front(),
                             PowerIterationSigmaMax(binv_a, 1e-8));
  rep.lemma7_bound = rep.phi_raw * rep.norm_binv_a;

  rep.unique_optimum = rep.min_xs > 0.0;
  if (rep.unique_optimum) {
    // A zero optimal component makes the corresponding ratio infinite.
    rep.Phi = l1 * std::max(col_term, row_term);
  }
  return rep;
}

bool verify_bound_chain(const ConditionReport& report) {
  if (!std::isfinite(report.Phi)) return true;
  const double lemma = report.lemma7_bound;
  const double tableau = report.phi_raw * std::max(report.z_p, report.z_d);
  return report.Phi <= (1.0 + kBoundSlack) * std::min(lemma, tableau);
}

}  // namespace rpdhg
