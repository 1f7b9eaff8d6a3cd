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

#include "rpdhg/probes.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpdhg/error.h"
#include "rpdhg/linalg.h"
#include "rpdhg/rng.h"
#include "rpdhg/stats.h"

namespace rpdhg {
namespace {

constexpr double kFeasibilityTol = 1e-10;
constexpr double kTieTol = 1e-10;
constexpr std::size_t kMaxBruteForceN = 20;

void CheckShape(std::size_t m, std::size_t n, std::int64_t trials) {
  Require(m >= 1 && m <= n, "probe: requires 1 <= m <= n");
  Require(trials >= 1, "probe: trials must be positive");
}

TailProbeResult MakeResult(std::int64_t trials, std::int64_t hits, double threshold,
                           double parameter) {
  TailProbeResult r;
  r.trials = trials;
  r.exceed_count = hits;
  r.empirical_rate = static_cast<double>(hits) / static_cast<double>(trials);
  r.threshold = threshold;
  r.parameter = parameter;
  return r;
}

}  // namespace

TailProbeResult probe_sigma_max(std::size_t m, std::size_t n,
                                const MatrixDistribution& dist,
                                std::int64_t trials, std::uint64_t seed) {
  CheckShape(m, n, trials);
  const double threshold = 5.0 * dist.sigma_a * std::sqrt(static_cast<double>(n));
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const DenseMatrix a =
        sample_random_matrix(m, n, dist, MixSeed(seed, {static_cast<std::uint64_t>(t)}));
    if (SingularValues(a).front() >= threshold) ++hits;
  }
  TailProbeResult r = MakeResult(trials, hits, threshold, 5.0);
  r.bound_rate = std::exp(-6.0 * static_cast<double>(n));
  return r;
}

std::vector<TailProbeResult> probe_sigma_min(std::size_t m, std::size_t n,
                                             const MatrixDistribution& dist,
                                             std::int64_t trials,
                                             std::span<const double> eps_grid,
                                             std::uint64_t seed) {
  CheckShape(m, n, trials);
  Require(!eps_grid.empty(), "probe_sigma_min: empty eps grid");
  for (double eps : eps_grid) Require(eps > 0.0, "probe_sigma_min: eps must be positive");
  const double scale = std::sqrt(static_cast<double>(n)) -
                       std::sqrt(static_cast<double>(m - 1));
  std::vector<std::int64_t> hits(eps_grid.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    const DenseMatrix a =
        sample_random_matrix(m, n, dist, MixSeed(seed, {static_cast<std::uint64_t>(t)}));
    const double smin = SingularValues(a).back();
    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
      if (smin <= eps_grid[k] * scale) ++hits[k];
    }
  }
  std::vector<TailProbeResult> out;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    out.push_back(MakeResult(trials, hits[k], eps_grid[k] * scale, eps_grid[k]));
  }
  return out;
}

KappaQuantiles probe_kappa(std::size_t m, std::size_t n,
                           const MatrixDistribution& dist, std::int64_t trials,
                           std::uint64_t seed) {
  CheckShape(m, n, trials);
  Require(trials >= 100, "probe_kappa: needs at least 100 trials");
  std::vector<double> kappa(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    const DenseMatrix a =
        sample_random_matrix(m, n, dist, MixSeed(seed, {static_cast<std::uint64_t>(t)}));
    const std::vector<double> sv = SingularValues(a);
    kappa[t] = sv.back() > 0.0 ? sv.front() / sv.back()
                               : std::numeric_limits<double>::infinity();
  }
  KappaQuantiles q;
  q.trials = trials;
  q.q50 = Quantile(kappa, 0.5);
  q.q90 = Quantile(kappa, 0.9);
  q.q99 = Quantile(kappa, 0.99);
  return q;
}

std::vector<TailProbeResult> probe_phi(std::size_t n, std::int64_t trials,
                                       std::span<const double> t_grid,
                                       std::uint64_t seed) {
  Require(n >= 1, "probe_phi: n must be positive");
  Require(trials >= 1, "probe_phi: trials must be positive");
  Require(!t_grid.empty(), "probe_phi: empty t grid");
  std::vector<std::int64_t> hits(t_grid.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng(MixSeed(seed, {static_cast<std::uint64_t>(t)}));
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::fabs(rng.Gaussian());
      sum += u;
      lo = std::min(lo, u);
    }
    const double phi_raw = sum / lo;  // +inf if some u_i == 0
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      if (phi_raw >= t_grid[k]) ++hits[k];
    }
  }
  std::vector<TailProbeResult> out;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    out.push_back(MakeResult(trials, hits[k], t_grid[k], t_grid[k]));
  }
  return out;
}

BruteForceResult brute_force_lp(const LpInstance& inst) {
  const std::size_t m = inst.m;
  const std::size_t n = inst.n;
  Require(n <= kMaxBruteForceN, "brute_force_lp: n must be at most 20");
  Require(m >= 1 && m <= n, "brute_force_lp: requires 1 <= m <= n");
  Require(inst.a.rows() == m && inst.a.cols() == n && inst.b.size() == m &&
              inst.c.size() == n,
          "brute_force_lp: instance dimensions are inconsistent");

  BruteForceResult best;
  bool found = false;
  std::vector<std::size_t> subset(m);
  for (std::size_t i = 0; i < m; ++i) subset[i] = i;
  while (true) {
    try {
      const LuFactorization lu(inst.a.SelectColumns(subset));
      const Vector xb = lu.Solve(inst.b);
      if (std::all_of(xb.begin(), xb.end(),
                      [](double v) { return v >= -kFeasibilityTol; })) {
        double objective = 0.0;
        for (std::size_t i = 0; i < m; ++i) objective += inst.c[subset[i]] * xb[i];
        const double tie = kTieTol * (1.0 + std::fabs(best.objective));
        if (!found || objective < best.objective - tie) {
          found = true;
          best.non_unique = false;
          best.objective = objective;
          best.basis = subset;
          best.x.assign(n, 0.0);
          for (std::size_t i = 0; i < m; ++i) best.x[subset[i]] = xb[i];
          Vector cb(m);
          for (std::size_t i = 0; i < m; ++i) cb[i] = inst.c[subset[i]];
          best.y = lu.SolveTransposed(cb);
          best.degenerate = std::any_of(xb.begin(), xb.end(), [](double v) {
            return std::fabs(v) <= kFeasibilityTol;
          });
        } else if (std::fabs(objective - best.objective) <= tie) {
          best.non_unique = true;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSingularMatrix) throw;
    }
    // Next subset in lexicographic order.
    std::size_t k = m;
    while (k > 0 && subset[k - 1] == n - m + (k - 1)) --k;
    if (k == 0) break;
    ++subset[k - 1];
    for (std::size_t i = k; i < m; ++i) subset[i] = subset[i - 1] + 1;
  }
  if (!found) Fail(ErrorKind::kInfeasible, "brute_force_lp: no feasible basis");
  const Vector aty = matvec_t(inst.a, best.y);
  best.s.resize(n);
  for (std::size_t j = 0; j < n; ++j) best.s[j] = inst.c[j] - aty[j];
  return best;
}

}  // namespace rpdhg
