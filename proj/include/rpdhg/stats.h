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

#ifndef RPDHG_STATS_H_
#define RPDHG_STATS_H_

// Order statistics and log-log regression used by the probes and the
// experiment harness.

#include <cstdint>
#include <span>
#include <vector>

namespace rpdhg {

// Linear-interpolation quantile (the R "type 7" rule). Requires a nonempty
// sample and p in [0, 1].
double Quantile(std::span<const double> values, double p);

struct QuartileSummary {
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

QuartileSummary quartiles(std::span<const double> values);

struct TailPoint {
  double delta = 0.0;
  std::int64_t iters = 0;
};

// For each delta the ceil((1 - delta) N)-th smallest count: the smallest
// budget that covers at least a (1 - delta) fraction of the runs.
std::vector<TailPoint> tail_curve(std::span<const std::int64_t> counts,
                                  std::span<const double> delta_grid);

struct LogLogPoint {
  double x = 0.0;
  double y = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // of ln y on ln x
  double r2 = 0.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  int points_used = 0;
};

// Least squares of ln y on ln x over the points with x in [fit_lo, fit_hi].
// Throws kArgument with fewer than two usable points or non-positive data.
SlopeFit loglog_slope(std::span<const LogLogPoint> points, double fit_lo,
                      double fit_hi);

// `count` points geometrically spaced from lo to hi inclusive.
std::vector<double> LogSpaced(double lo, double hi, int count);

}  // namespace rpdhg

#endif  // RPDHG_STATS_H_
