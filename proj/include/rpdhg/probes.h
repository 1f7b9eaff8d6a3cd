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

#ifndef RPDHG_PROBES_H_
#define RPDHG_PROBES_H_

// Monte-Carlo checks of the random-matrix and random-vector tail events that
// drive the high-probability iteration bounds, and an exhaustive LP oracle
// for tiny instances.
//
// Every trial t draws from its own stream MixSeed(seed, {t}), so results are
// reproducible trial by trial.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rpdhg/dense_matrix.h"
#include "rpdhg/instance.h"

namespace rpdhg {

struct TailProbeResult {
  std::int64_t trials = 0;
  std::int64_t exceed_count = 0;
  double empirical_rate = 0.0;       // exceed_count / trials
  std::optional<double> bound_rate;  // absent when the constants are unknown
  double threshold = 0.0;            // the event's cut-off
  double parameter = 0.0;            // eps or t for swept probes
};

// Event sigma_1(A) >= 5 sigma_A sqrt(n) for m x n matrices (m <= n), with
// bound e^{-6n}.
TailProbeResult probe_sigma_max(std::size_t m, std::size_t n,
                                const MatrixDistribution& dist,
                                std::int64_t trials, std::uint64_t seed);

// Event sigma_m(A) <= eps (sqrt(n) - sqrt(m - 1)), one result per eps. The
// same matrices are reused across eps, so the curve is monotone.
std::vector<TailProbeResult> probe_sigma_min(std::size_t m, std::size_t n,
                                             const MatrixDistribution& dist,
                                             std::int64_t trials,
                                             std::span<const double> eps_grid,
                                             std::uint64_t seed);

struct KappaQuantiles {
  std::int64_t trials = 0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

// Empirical quantiles of sigma_1(A) / sigma_m(A). Requires trials >= 100.
KappaQuantiles probe_kappa(std::size_t m, std::size_t n,
                           const MatrixDistribution& dist, std::int64_t trials,
                           std::uint64_t seed);

// Event ||u||_1 / min_i u_i >= t for u with i.i.d. |N(0, 1)| entries.
std::vector<TailProbeResult> probe_phi(std::size_t n, std::int64_t trials,
                                       std::span<const double> t_grid,
                                       std::uint64_t seed);

struct BruteForceResult {
  Vector x;
  Vector y;
  Vector s;
  std::vector<std::size_t> basis;  // 0-based, ascending
  double objective = 0.0;
  // Another feasible basis reached the same objective within 1e-10.
  bool non_unique = false;
  // Some basic variable of the returned basis is within 1e-10 of zero.
  bool degenerate = false;
};

// Enumerates every m-subset of columns. Requires n <= 20; throws kInfeasible
// when no basis is primal feasible.
BruteForceResult brute_force_lp(const LpInstance& inst);

}  // namespace rpdhg

#endif  // RPDHG_PROBES_H_
