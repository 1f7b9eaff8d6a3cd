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

// AVX2 + FMA kernels. This file is compiled with -mavx2 -mfma and must only
// be entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "rpdhg/kernels.h"

namespace rpdhg::kernels::avx2 {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                           _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                           _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = HorizontalSum(
      _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

// Four rows per pass so each load of x feeds four FMAs.
void Gemv(const double* a, std::size_t rows, std::size_t cols,
          const double* x, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= rows; i += 4) {
    const double* r0 = a + i * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      const __m256d xv = _mm256_loadu_pd(x + j);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + j), xv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + j), xv, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + j), xv, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + j), xv, s3);
    }
    double t0 = HorizontalSum(s0);
    double t1 = HorizontalSum(s1);
    double t2 = HorizontalSum(s2);
    double t3 = HorizontalSum(s3);
    for (; j < cols; ++j) {
      t0 += r0[j] * x[j];
      t1 += r1[j] * x[j];
      t2 += r2[j] * x[j];
      t3 += r3[j] * x[j];
    }
    out[i] = t0;
    out[i + 1] = t1;
    out[i + 2] = t2;
    out[i + 3] = t3;
  }
  for (; i < rows; ++i) out[i] = Dot(a + i * cols, x, cols);
}

void GemvT(const double* a, std::size_t rows, std::size_t cols,
           const double* y, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= rows; i += 4) {
    const double* r0 = a + i * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    const __m256d y0 = _mm256_set1_pd(y[i]);
    const __m256d y1 = _mm256_set1_pd(y[i + 1]);
    const __m256d y2 = _mm256_set1_pd(y[i + 2]);
    const __m256d y3 = _mm256_set1_pd(y[i + 3]);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d acc = _mm256_loadu_pd(out + j);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + j), y0, acc);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + j), y1, acc);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + j), y2, acc);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + j), y3, acc);
      _mm256_storeu_pd(out + j, acc);
    }
    for (; j < cols; ++j) {
      out[j] += r0[j] * y[i] + r1[j] * y[i + 1] + r2[j] * y[i + 2] +
                r3[j] * y[i + 3];
    }
  }
  for (; i < rows; ++i) {
    const double* row = a + i * cols;
    const __m256d yi = _mm256_set1_pd(y[i]);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(out + j, _mm256_fmadd_pd(_mm256_loadu_pd(row + j), yi,
                                                _mm256_loadu_pd(out + j)));
    }
    for (; j < cols; ++j) out[j] += row[j] * y[i];
  }
}

void PrimalStep(const double* x, const double* c, const double* aty,
                double tau, std::size_t n, double* x_next, double* x_extrap) {
  const __m256d tau_v = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d old = _mm256_loadu_pd(x + i);
    const __m256d grad =
        _mm256_sub_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(aty + i));
    const __m256d trial = _mm256_fnmadd_pd(tau_v, grad, old);
    // max_pd returns the second operand unless trial > 0, so NaN and -0.0
    // both become +0.0.
    const __m256d projected = _mm256_max_pd(trial, zero);
    _mm256_storeu_pd(x_next + i, projected);
    _mm256_storeu_pd(x_extrap + i,
                     _mm256_sub_pd(_mm256_add_pd(projected, projected), old));
  }
  for (; i < n; ++i) {
    const double old = x[i];
    const double trial = old - tau * (c[i] - aty[i]);
    const double projected = trial > 0.0 ? trial : 0.0;
    x_next[i] = projected;
    x_extrap[i] = 2.0 * projected - old;
  }
}

void DualStep(const double* y, const double* b, const double* ax,
              double sigma, std::size_t m, double* y_next) {
  const __m256d sigma_v = _mm256_set1_pd(sigma);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d resid =
        _mm256_sub_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(ax + i));
    _mm256_storeu_pd(y_next + i,
                     _mm256_fmadd_pd(sigma_v, resid, _mm256_loadu_pd(y + i)));
  }
  for (; i < m; ++i) y_next[i] = y[i] + sigma * (b[i] - ax[i]);
}

void RunningMean(double* avg, const double* v, double weight, std::size_t n) {
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cur = _mm256_loadu_pd(avg + i);
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(v + i), cur);
    _mm256_storeu_pd(avg + i, _mm256_fmadd_pd(w, diff, cur));
  }
  for (; i < n; ++i) avg[i] += weight * (v[i] - avg[i]);
}

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

constexpr KernelTable kTable{
    .isa = Isa::kAvx2,
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

}  // namespace rpdhg::kernels::avx2
