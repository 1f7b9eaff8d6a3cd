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

#include "rpdhg/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rpdhg/error.h"
#include "rpdhg/kernels.h"
#include "rpdhg/metrics.h"

namespace rpdhg {
namespace {

constexpr double kDivergenceFactor = 1e12;
constexpr int kMaxBisections = 200;

void CheckShapes(const IterateState& state, const LpInstance& inst) {
  Require(state.x.size() == inst.n && state.x_avg.size() == inst.n,
          "iterate state: x has wrong length");
  Require(state.y.size() == inst.m && state.y_avg.size() == inst.m,
          "iterate state: y has wrong length");
}

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Owns the preallocated buffers of one solve and performs PDHG steps in place.
class Workspace {
 public:
  Workspace(const LpInstance& inst, const StepSizes& steps)
      : inst_(inst),
        steps_(steps),
        kernels_(kernels::Active()),
        aty_(inst.n),
        x_extrap_(inst.n),
        ax_(inst.m) {}

  void Step(IterateState& s) {
    const std::size_t m = inst_.m;
    const std::size_t n = inst_.n;
    kernels_.gemv_t(inst_.a.data(), m, n, s.y.data(), aty_.data());
    kernels_.primal_step(s.x.data(), inst_.c.data(), aty_.data(), steps_.tau, n,
                         s.x.data(), x_extrap_.data());
    kernels_.gemv(inst_.a.data(), m, n, x_extrap_.data(), ax_.data());
    kernels_.dual_step(s.y.data(), inst_.b.data(), ax_.data(), steps_.sigma, m,
                       s.y.data());
    matvecs_ += 2;
    ++s.inner_count;
    ++s.total_iters;
    const double weight = 1.0 / static_cast<double>(s.inner_count);
    kernels_.running_mean(s.x_avg.data(), s.x.data(), weight, n);
    kernels_.running_mean(s.y_avg.data(), s.y.data(), weight, m);
  }

  // g_x = A^T y - c, g_y = b - A x.
  void Gradients(std::span<const double> x, std::span<const double> y,
                 Vector& grad_x, Vector& grad_y) {
    const std::size_t m = inst_.m;
    const std::size_t n = inst_.n;
    grad_x.resize(n);
    grad_y.resize(m);
    kernels_.gemv_t(inst_.a.data(), m, n, y.data(), grad_x.data());
    kernels_.gemv(inst_.a.data(), m, n, x.data(), grad_y.data());
    matvecs_ += 2;
    for (std::size_t j = 0; j < n; ++j) grad_x[j] -= inst_.c[j];
    for (std::size_t i = 0; i < m; ++i) grad_y[i] = inst_.b[i] - grad_y[i];
  }

  double SquaredDistance(const Vector& a, const Vector& b) const {
    return kernels_.squared_distance(a.data(), b.data(), a.size());
  }

  double Norm(const Vector& x, const Vector& y) const {
    return std::sqrt(kernels_.dot(x.data(), x.data(), x.size()) +
                     kernels_.dot(y.data(), y.data(), y.size()));
  }

  std::int64_t matvecs() const { return matvecs_; }
  void CountMatvecs(std::int64_t k) { matvecs_ += k; }

 private:
  const LpInstance& inst_;
  StepSizes steps_;
  const kernels::KernelTable& kernels_;
  Vector aty_;
  Vector x_extrap_;
  Vector ax_;
  std::int64_t matvecs_ = 0;
};

class TraceRecorder {
 public:
  TraceRecorder(const LpInstance& inst, const SolverConfig& cfg, RunRecord& record)
      : cfg_(cfg), record_(record), in_basis_(inst.n, 0) {
    for (std::size_t j : inst.basis) in_basis_[j] = 1;
  }

  void Record(std::int64_t iter, const Vector& x, double dist, bool force) {
    if (!force && iter % cfg_.trace_stride != 0) return;
    if (iter == last_iter_) {
      // Forced final sample on an iteration already recorded.
      auto& dt = record_.dist_trace;
      if (force && (dt.empty() || dt.back().iter != iter)) dt.push_back({iter, dist});
      return;
    }
    last_iter_ = iter;
    bool on_basis = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if ((x[j] > 0.0) != (in_basis_[j] != 0)) {
        on_basis = false;
        break;
      }
    }
    auto& bt = record_.basis_trace;
    if (bt.empty() || bt.back().on_basis != on_basis) bt.push_back({iter, on_basis});
    if (cfg_.record_support_trace) {
      support_.clear();
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] > 0.0) support_.push_back(j);
      }
      auto& st = record_.support_trace;
      if (st.empty() || st.back().support != support_) st.push_back({iter, support_});
    }
    if (cfg_.record_dist_trace || force || record_.dist_trace.empty()) {
      record_.dist_trace.push_back({iter, dist});
    }
  }

 private:
  const SolverConfig& cfg_;
  RunRecord& record_;
  std::vector<char> in_basis_;
  std::vector<std::size_t> support_;
  std::int64_t last_iter_ = -1;
};

}  // namespace

StepSizes compute_step_sizes(const SpectralExtremes& spectrum) {
  Require(spectrum.sigma_max > 0.0 && spectrum.sigma_min_nonzero > 0.0,
          "compute_step_sizes: singular values must be positive");
  return {spectrum.sigma_min_nonzero / (2.0 * spectrum.sigma_max),
          1.0 / (2.0 * spectrum.sigma_min_nonzero * spectrum.sigma_max)};
}

void validate_config(const SolverConfig& cfg) {
  Require(cfg.beta > 0.0 && cfg.beta < 1.0, "solver config: beta must lie in (0, 1)");
  Require(cfg.check_period > 0, "solver config: check_period must be positive");
  Require(cfg.dist_tol > 0.0, "solver config: dist_tol must be positive");
  Require(cfg.max_iters >= 0, "solver config: max_iters must be nonnegative");
  Require(cfg.spectral_rel_tol > 0.0 && cfg.spectral_rel_tol <= 1e-2,
          "solver config: spectral_rel_tol must lie in (0, 1e-2]");
  Require(cfg.gap_bisect_tol > 0.0 && cfg.gap_bisect_tol < 1.0,
          "solver config: gap_bisect_tol must lie in (0, 1)");
  Require(cfg.trace_stride > 0, "solver config: trace_stride must be positive");
  Require(cfg.kkt_tol > 0.0, "solver config: kkt_tol must be positive");
}

IterateState initial_state(const LpInstance& inst) {
  IterateState s;
  s.x.assign(inst.n, 0.0);
  s.y.assign(inst.m, 0.0);
  s.x_avg.assign(inst.n, 0.0);
  s.y_avg.assign(inst.m, 0.0);
  return s;
}

IterateState one_pdhg(const IterateState& state, const LpInstance& inst,
                      const StepSizes& steps) {
  CheckShapes(state, inst);
  IterateState next = state;
  Workspace ws(inst, steps);
  ws.Step(next);
  if (!AllFinite(next.x) || !AllFinite(next.y)) {
    throw DivergenceError(next.total_iters,
                          "one_pdhg: non-finite iterate at iteration " +
                              std::to_string(next.total_iters));
  }
  return next;
}

double normalized_gap_from_gradient(std::span<const double> x,
                                    std::span<const double> grad_x,
                                    std::span<const double> grad_y, double r,
                                    double bisect_tol) {
  Require(r > 0.0, "normalized_gap: radius must be positive");
  Require(x.size() == grad_x.size(), "normalized_gap: length mismatch");
  double gx2 = 0.0;
  bool unbounded = false;  // some direction is free of the x >= 0 limit
  for (double g : grad_x) {
    gx2 += g * g;
    if (g > 0.0) unbounded = true;
  }
  double gy2 = 0.0;
  for (double g : grad_y) gy2 += g * g;
  if (gy2 > 0.0) unbounded = true;
  const double gnorm = std::sqrt(gx2 + gy2);
  if (gnorm == 0.0) return 0.0;

  // The unconstrained maximizer r g / ||g|| may already respect x >= 0.
  bool interior = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] + r * grad_x[i] / gnorm < 0.0) {
      interior = false;
      break;
    }
  }
  if (interior) return gnorm;

  // d(lambda) = (max(-x, g_x / lambda), g_y / lambda) maximizes g^T d over the
  // shifted orthant with multiplier lambda on the ball; ||d(lambda)|| is
  // nonincreasing, so bisect for ||d|| = r.
  auto norm_at = [&](double lambda) {
    double sum = gy2 / (lambda * lambda);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = std::max(-x[i], grad_x[i] / lambda);
      sum += d * d;
    }
    return std::sqrt(sum);
  };
  auto value_at = [&](double lambda) {
    double sum = gy2 / lambda;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += grad_x[i] * std::max(-x[i], grad_x[i] / lambda);
    }
    return sum;
  };

  if (!unbounded) {
    // As lambda -> 0, d tends to (-x on {g_x < 0}, 0 elsewhere).
    double limit2 = 0.0;
    double limit_value = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (grad_x[i] < 0.0) {
        limit2 += x[i] * x[i];
        limit_value -= grad_x[i] * x[i];
      }
    }
    if (std::sqrt(limit2) <= r) return limit_value / r;
  }

  double hi = 2.0 * gnorm / r;  // ||d(hi)|| <= r / 2
  double lo = hi;
  for (int i = 0; i < 2000 && norm_at(lo) < r; ++i) lo *= 0.25;
  for (int i = 0; i < kMaxBisections; ++i) {
    if (r - norm_at(hi) <= bisect_tol * r) break;
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (norm_at(mid) > r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::max(value_at(hi), 0.0) / r;
}

double normalized_gap(std::span<const double> x, std::span<const double> y,
                      double r, const LpInstance& inst, double bisect_tol) {
  Require(r > 0.0, "normalized_gap: radius must be positive");
  Require(x.size() == inst.n && y.size() == inst.m, "normalized_gap: length mismatch");
  for (double v : x) Require(v >= 0.0, "normalized_gap: x must be nonnegative");
  Vector grad_x = matvec_t(inst.a, y);
  for (std::size_t j = 0; j < inst.n; ++j) grad_x[j] -= inst.c[j];
  Vector grad_y = matvec(inst.a, x);
  for (std::size_t i = 0; i < inst.m; ++i) grad_y[i] = inst.b[i] - grad_y[i];
  return normalized_gap_from_gradient(x, grad_x, grad_y, r, bisect_tol);
}

double kkt_residual(std::span<const double> x, std::span<const double> y,
                    const LpInstance& inst) {
  Vector ax = matvec(inst.a, x);
  for (std::size_t i = 0; i < inst.m; ++i) ax[i] -= inst.b[i];
  const double primal = Norm2(ax) / (1.0 + Norm2(inst.b));
  Vector slack = matvec_t(inst.a, y);
  double dual_violation2 = 0.0;
  for (std::size_t j = 0; j < inst.n; ++j) {
    const double s = inst.c[j] - slack[j];
    if (s < 0.0) dual_violation2 += s * s;
  }
  const double dual = std::sqrt(dual_violation2) / (1.0 + Norm2(inst.c));
  const double pobj = Dot(inst.c, x);
  const double dobj = Dot(inst.b, y);
  const double gap = std::fabs(pobj - dobj) / (1.0 + std::fabs(pobj) + std::fabs(dobj));
  return std::max({primal, dual, gap});
}

RunRecord solve(const LpInstance& inst, const SolverConfig& cfg) {
  validate_config(cfg);
  Require(inst.a.rows() == inst.m && inst.a.cols() == inst.n &&
              inst.b.size() == inst.m && inst.c.size() == inst.n,
          "solve: instance dimensions are inconsistent");
  const bool use_distance = cfg.stop_rule == StopRule::kDistanceToOptimum;
  if (use_distance) {
    Require(inst.x_star.size() == inst.n && inst.y_star.size() == inst.m,
            "solve: distance stopping needs x_star and y_star");
  }

  RunRecord record;
  record.spectrum = spectral_extremes(inst.a, cfg.spectral_rel_tol);
  record.steps = compute_step_sizes(record.spectrum);

  const std::size_t m = inst.m;
  const std::size_t n = inst.n;
  Workspace ws(inst, record.steps);
  TraceRecorder trace(inst, cfg, record);
  IterateState state = initial_state(inst);

  const Vector x_star = use_distance ? inst.x_star : Vector(n, 0.0);
  const Vector y_star = use_distance ? inst.y_star : Vector(m, 0.0);
  const double star_norm = std::sqrt(Norm2(x_star) * Norm2(x_star) +
                                     Norm2(y_star) * Norm2(y_star));
  const double divergence_limit = kDivergenceFactor * (1.0 + star_norm);
  auto distance = [&]() {
    return std::sqrt(ws.SquaredDistance(state.x, x_star) +
                     ws.SquaredDistance(state.y, y_star));
  };

  // Epoch start z^{n,0} and its gradients; the origin's are (-c, b).
  Vector start_x(n, 0.0);
  Vector start_y(m, 0.0);
  Vector start_grad_x(inst.c);
  for (double& v : start_grad_x) v = -v;
  Vector start_grad_y(inst.b);
  double start_gap = 0.0;
  Vector avg_grad_x;
  Vector avg_grad_y;

  double dist = distance();
  trace.Record(0, state.x, dist, /*force=*/false);
  bool solved = use_distance && dist <= cfg.dist_tol;
  if (!use_distance && cfg.max_iters == 0) {
    solved = kkt_residual(state.x, state.y, inst) <= cfg.kkt_tol;
  }

  while (!solved && state.total_iters < cfg.max_iters) {
    ws.Step(state);

    if (state.inner_count % cfg.check_period == 0) {
      double radius = std::sqrt(ws.SquaredDistance(state.x_avg, start_x) +
                                ws.SquaredDistance(state.y_avg, start_y));
      if (!(radius > 0.0)) radius = 1.0;
      ws.Gradients(state.x_avg, state.y_avg, avg_grad_x, avg_grad_y);
      ++record.gap_evaluations;
      const double gap_avg = normalized_gap_from_gradient(
          state.x_avg, avg_grad_x, avg_grad_y, radius, cfg.gap_bisect_tol);
      if (state.epoch_index == 0) {
        start_gap = normalized_gap_from_gradient(start_x, start_grad_x, start_grad_y,
                                                 radius, cfg.gap_bisect_tol);
      }
      if (gap_avg <= cfg.beta * start_gap) {
        if (cfg.record_restarts) {
          record.restarts.push_back({state.total_iters, gap_avg, start_gap});
        }
        start_x = state.x_avg;
        start_y = state.y_avg;
        start_grad_x.swap(avg_grad_x);
        start_grad_y.swap(avg_grad_y);
        start_gap = gap_avg;
        state.x = state.x_avg;
        state.y = state.y_avg;
        std::fill(state.x_avg.begin(), state.x_avg.end(), 0.0);
        std::fill(state.y_avg.begin(), state.y_avg.end(), 0.0);
        state.inner_count = 0;
        ++state.epoch_index;
      }
      if (!use_distance) {
        ws.CountMatvecs(2);
        if (kkt_residual(state.x, state.y, inst) <= cfg.kkt_tol) solved = true;
      }
    }

    dist = distance();
    if (!std::isfinite(dist) || ws.Norm(state.x, state.y) > divergence_limit) {
      throw DivergenceError(state.total_iters,
                            "solve: iterate diverged at iteration " +
                                std::to_string(state.total_iters));
    }
    if (use_distance && dist <= cfg.dist_tol) solved = true;
    trace.Record(state.total_iters, state.x, dist, /*force=*/solved);
  }
  trace.Record(state.total_iters, state.x, dist, /*force=*/true);

  record.solved = solved;
  record.total_iters = state.total_iters;
  record.final_dist = dist;
  record.epochs = state.epoch_index + 1;
  record.matvec_count = ws.matvecs();
  record.x = std::move(state.x);
  record.y = std::move(state.y);

  if (solved && use_distance && inst.meta.certificate.certified()) {
    const StageDecomposition stages =
        detect_stages(record.basis_trace, record.total_iters);
    record.stages_available = true;
    record.settled = stages.settled;
    record.t_basis = stages.t_basis;
    record.t_local = stages.t_local;
  }
  return record;
}

}  // namespace rpdhg
