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

// Reference kernels. Compiled with -ffp-contract=off so results follow the
// plain left-to-right evaluation order written here.

#include "rpdhg/kernels.h"

namespace rpdhg::kernels::scalar {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void Gemv(const double* a, std::size_t rows, std::size_t cols,
          const double* x, double* out) {
  for (std::size_t i = 0; i < rows; ++i) out[i] = Dot(a + i * cols, x, cols);
}

void GemvT(const double* a, std::size_t rows, std::size_t cols,
           const double* y, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = a + i * cols;
    const double yi = y[i];
    for (std::size_t j = 0; j < cols; ++j) out[j] += yi * row[j];
  }
}

void PrimalStep(const double* x, const double* c, const double* aty,
                double tau, std::size_t n, double* x_next, double* x_extrap) {
  for (std::size_t i = 0; i < n; ++i) {
    const double old = x[i];
    const double trial = old - tau * (c[i] - aty[i]);
    // Written as a comparison so NaN and -0.0 both map to +0.0, matching
    // _mm256_max_pd(trial, 0).
    const double projected = trial > 0.0 ? trial : 0.0;
    x_next[i] = projected;
    x_extrap[i] = 2.0 * projected - old;
  }
}

void DualStep(const double* y, const double* b, const double* ax,
              double sigma, std::size_t m, double* y_next) {
  for (std::size_t i = 0; i < m; ++i) y_next[i] = y[i] + sigma * (b[i] - ax[i]);
}

void RunningMean(double* avg, const double* v, double weight, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) avg[i] += weight * (v[i] - avg[i]);
}

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

constexpr KernelTable kTable{
    .isa = Isa::kScalar,
    .dot = Dot,
    .gemv = Gemv,
    .gemv_t = GemvT,
    .primal_step = PrimalStep,
    .dual_step = DualStep,
    .running_mean = RunningMean,
    .squared_distance = SquaredDistance,
};

}  // namespace

const KernelTable& Table() { return kTable; }

}  // namespace rpdhg::kernels::scalar
