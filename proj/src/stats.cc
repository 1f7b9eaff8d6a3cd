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

#include "rpdhg/stats.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpdhg/error.h"

namespace rpdhg {

double Quantile(std::span<const double> values, double p) {
  Require(!values.empty(), "quantile of an empty sample");
  Require(p >= 0.0 && p <= 1.0, "quantile level must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

QuartileSummary quartiles(std::span<const double> values) {
  return {Quantile(values, 0.25), Quantile(values, 0.5), Quantile(values, 0.75)};
}

std::vector<TailPoint> tail_curve(std::span<const std::int64_t> counts,
                                  std::span<const double> delta_grid) {
  Require(!counts.empty(), "tail_curve: no records");
  std::vector<std::int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<TailPoint> out;
  out.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    Require(delta > 0.0 && delta < 1.0, "tail_curve: delta must lie in (0, 1)");
    // The slack keeps e.g. 0.9 * 100 from rounding up to 91.
    double k = std::ceil((1.0 - delta) * n - 1e-9);
    k = std::clamp(k, 1.0, n);
    out.push_back({delta, sorted[static_cast<std::size_t>(k) - 1]});
  }
  return out;
}

SlopeFit loglog_slope(std::span<const LogLogPoint> points, double fit_lo,
                      double fit_hi) {
  Require(fit_lo <= fit_hi, "loglog_slope: empty fit range");
  std::vector<double> lx;
  std::vector<double> ly;
  for (const LogLogPoint& p : points) {
    if (p.x < fit_lo || p.x > fit_hi) continue;
    Require(p.x > 0.0 && p.y > 0.0, "loglog_slope: points must be positive");
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(p.y));
  }
  Require(lx.size() >= 2, "loglog_slope: fewer than two points in range (" +
                              std::to_string(lx.size()) + ")");
  const double k = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  Require(sxx > 0.0, "loglog_slope: all x values coincide");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.fit_lo = fit_lo;
  fit.fit_hi = fit_hi;
  fit.points_used = static_cast<int>(lx.size());
  return fit;
}

std::vector<double> LogSpaced(double lo, double hi, int count) {
  Require(lo > 0.0 && hi >= lo && count >= 1, "LogSpaced: bad range");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

}  // namespace rpdhg
