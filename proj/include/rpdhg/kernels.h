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

#ifndef RPDHG_KERNELS_H_
#define RPDHG_KERNELS_H_

// Data-parallel inner loops of the solver. Every kernel has a scalar
// reference implementation and, where the CPU supports it, an AVX2+FMA
// variant. The active table is chosen once at startup from CPUID and can be
// overridden with RPDHG_ISA=scalar|avx2 or SetActiveIsa().
//
// Variants agree up to floating-point reassociation; they are not bit-equal.

#include <cstddef>
#include <string_view>

namespace rpdhg::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out = A x, A row-major rows x cols.
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* out);
  // out = A^T y.
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* y, double* out);
  // x_next = max(0, x - tau (c - aty)); x_extrap = 2 x_next - x.
  // x_next may alias x.
  void (*primal_step)(const double* x, const double* c, const double* aty,
                      double tau, std::size_t n, double* x_next,
                      double* x_extrap);
  // y_next = y + sigma (b - ax). y_next may alias y.
  void (*dual_step)(const double* y, const double* b, const double* ax,
                    double sigma, std::size_t m, double* y_next);
  // avg += weight (v - avg)
  void (*running_mean)(double* avg, const double* v, double weight,
                       std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

// Best ISA the running CPU supports among the compiled-in variants.
Isa DetectIsa();
bool IsaAvailable(Isa isa);

// Table for a specific ISA. Throws kArgument if `isa` is not available.
const KernelTable& Table(Isa isa);

const KernelTable& Active();
Isa ActiveIsa();
// Process-wide override; intended for tests and benchmarking.
void SetActiveIsa(Isa isa);

namespace scalar {
const KernelTable& Table();
}  // namespace scalar

#if defined(RPDHG_HAVE_AVX2)
namespace avx2 {
const KernelTable& Table();
}  // namespace avx2
#endif

}  // namespace rpdhg::kernels

#endif  // RPDHG_KERNELS_H_
