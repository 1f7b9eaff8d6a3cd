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

#ifndef RPDHG_RNG_H_
#define RPDHG_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rpdhg {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive independent
// per-instance and per-trial seeds from a master seed.
std::uint64_t SplitMix64(std::uint64_t x);

// Folds `parts` into `master` with SplitMix64. The mapping is fixed so that
// seeds recorded in manifests stay meaningful across releases.
std::uint64_t MixSeed(std::uint64_t master,
                      std::initializer_list<std::uint64_t> parts);

// std::mt19937_64 (whose output sequence is fixed by the C++ standard) with
// our own conversions to uniforms and Box-Muller normals, so the sample
// stream does not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1].
  double UniformOpenZero() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  double Gaussian();
  double Rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }
  // Uniform integer in [0, bound).
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rpdhg

#endif  // RPDHG_RNG_H_
