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

#ifndef RPDHG_SOLVER_H_
#define RPDHG_SOLVER_H_

// Restarted primal-dual hybrid gradient (rPDHG) for  min c^T x, A x = b,
// x >= 0, acting on the saddle function L(x, y) = c^T x + b^T y - y^T A x.
//
// One PDHG step:
//   x+ = max(0, x - tau (c - A^T y))
//   y+ = y + sigma (b - A (2 x+ - x))
// with tau = s_min / (2 s_max), sigma = 1 / (2 s_min s_max), where s_max and
// s_min are the largest and smallest nonzero singular values of A.
//
// The outer loop restarts from the running average of the current epoch
// whenever the average's normalized duality gap falls to a beta fraction of
// the epoch start's gap (checked every `check_period` inner steps).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rpdhg/dense_matrix.h"
#include "rpdhg/instance.h"
#include "rpdhg/linalg.h"

namespace rpdhg {

struct StepSizes {
  double tau = 0.0;    // primal
  double sigma = 0.0;  // dual
};

// tau * sigma * s_max^2 == 1/4.
StepSizes compute_step_sizes(const SpectralExtremes& spectrum);

enum class StopRule {
  // ||(x, y) - (x*, y*)|| <= dist_tol, checked after every step.
  kDistanceToOptimum,
  // Relative KKT residual <= kkt_tol, checked every check_period steps. For
  // instances whose optimum is not trusted; thresholds are our own choice.
  kKktResidual,
};

struct SolverConfig {
  double beta = 0.36787944117144233;  // 1/e
  std::int64_t check_period = 64;
  double dist_tol = 1e-4;
  std::int64_t max_iters = 10'000'000;
  double spectral_rel_tol = kDefaultSpectralRelTol;
  double gap_bisect_tol = 1e-9;
  std::int64_t trace_stride = 1;
  StopRule stop_rule = StopRule::kDistanceToOptimum;
  double kkt_tol = 1e-8;
  // Full support snapshots (change points only). Off by default: the basis
  // on/off trace is enough for stage detection and is far smaller.
  bool record_support_trace = false;
  // Distance samples every trace_stride steps (the first and final samples
  // are always kept).
  bool record_dist_trace = false;
  // Restart-event log, used to audit the restart contract.
  bool record_restarts = true;
};

// Throws kArgument when a field is out of range.
void validate_config(const SolverConfig& cfg);

struct IterateState {
  Vector x;
  Vector y;
  Vector x_avg;  // mean of inner iterates since the last restart
  Vector y_avg;
  std::int64_t inner_count = 0;
  std::int64_t epoch_index = 0;
  std::int64_t total_iters = 0;
};

// Zero iterate sized for `inst`.
IterateState initial_state(const LpInstance& inst);

// One PDHG step from state.(x, y): advances x, y, the running averages and
// the counters. Throws DivergenceError on non-finite output.
IterateState one_pdhg(const IterateState& state, const LpInstance& inst,
                      const StepSizes& steps);

// (1/r) max { L(x, y_hat) - L(x_hat, y) : ||(x_hat, y_hat) - (x, y)|| <= r,
// x_hat >= 0 }. Exact up to bisect_tol * r on the ball radius. Zero iff
// (x, y) is a saddle point. Requires r > 0 and x >= 0.
double normalized_gap(std::span<const double> x, std::span<const double> y,
                      double r, const LpInstance& inst, double bisect_tol = 1e-9);

// Same, with the gradients g_x = A^T y - c and g_y = b - A x supplied.
double normalized_gap_from_gradient(std::span<const double> x,
                                    std::span<const double> grad_x,
                                    std::span<const double> grad_y, double r,
                                    double bisect_tol);

struct SupportSnapshot {
  std::int64_t iter = 0;
  std::vector<std::size_t> support;  // indices with x_i > 0, ascending

  friend bool operator==(const SupportSnapshot&, const SupportSnapshot&) = default;
};

// Whether support(x^iter) equals the optimal basis; change points only.
struct BasisTracePoint {
  std::int64_t iter = 0;
  bool on_basis = false;

  friend bool operator==(const BasisTracePoint&, const BasisTracePoint&) = default;
};

struct DistSample {
  std::int64_t iter = 0;
  double dist = 0.0;
};

struct RestartEvent {
  std::int64_t iter = 0;
  double gap_average = 0.0;
  double gap_epoch_start = 0.0;
};

struct RunRecord {
  bool solved = false;
  std::int64_t total_iters = 0;
  // Stage split; meaningful only when stages_available (certified instance,
  // solved under the distance rule).
  bool stages_available = false;
  bool settled = false;
  std::int64_t t_basis = 0;
  std::int64_t t_local = 0;
  double final_dist = 0.0;
  std::int64_t epochs = 0;
  std::int64_t matvec_count = 0;  // products with A or A^T inside the loop
  std::int64_t gap_evaluations = 0;
  StepSizes steps;
  SpectralExtremes spectrum;
  std::vector<BasisTracePoint> basis_trace;
  std::vector<SupportSnapshot> support_trace;
  std::vector<DistSample> dist_trace;
  std::vector<RestartEvent> restarts;
  Vector x;  // final iterate
  Vector y;
};

// Runs rPDHG from (0, 0). Unsolved runs come back with solved = false;
// DivergenceError propagates.
RunRecord solve(const LpInstance& inst, const SolverConfig& cfg);

// Relative KKT residual used by StopRule::kKktResidual: the max of primal
// infeasibility, dual infeasibility and duality gap, each relative.
double kkt_residual(std::span<const double> x, std::span<const double> y,
                    const LpInstance& inst);

}  // namespace rpdhg

#endif  // RPDHG_SOLVER_H_
