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

#include <atomic>
#include <cstdlib>
#include <string>

#include "rpdhg/error.h"
#include "rpdhg/kernels.h"

namespace rpdhg::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(RPDHG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* InitialTable() {
  Isa isa = DetectIsa();
  if (const char* env = std::getenv("RPDHG_ISA"); env != nullptr) {
    const std::string requested(env);
    if (requested == "scalar") {
      isa = Isa::kScalar;
    } else if (requested == "avx2" && IsaAvailable(Isa::kAvx2)) {
      isa = Isa::kAvx2;
    }
  }
  return &Table(isa);
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{InitialTable()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2: {
      static const bool has = CpuHasAvx2();
      return has;
    }
  }
  return false;
}

Isa DetectIsa() { return IsaAvailable(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

const KernelTable& Table(Isa isa) {
  Require(IsaAvailable(isa),
          "kernel ISA " + std::string(IsaName(isa)) + " is not available");
#if defined(RPDHG_HAVE_AVX2)
  if (isa == Isa::kAvx2) return avx2::Table();
#endif
  return scalar::Table();
}

const KernelTable& Active() {
  return *ActiveSlot().load(std::memory_order_acquire);
}

Isa ActiveIsa() { return Active().isa; }

void SetActiveIsa(Isa isa) {
  ActiveSlot().store(&Table(isa), std::memory_order_release);
}

}  // namespace rpdhg::kernels
