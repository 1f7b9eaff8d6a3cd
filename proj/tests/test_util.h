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

#ifndef RPDHG_TESTS_TEST_UTIL_H_
#define RPDHG_TESTS_TEST_UTIL_H_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rpdhg/dense_matrix.h"
#include "rpdhg/instance.h"
#include "rpdhg/rng.h"

namespace rpdhg::testing {

inline Eigen::MatrixXd ToEigen(const DenseMatrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  return out;
}

inline Eigen::VectorXd ToEigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector RandomVector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Vector v(n);
  for (double& x : v) x = scale * rng.Gaussian();
  return v;
}

inline DenseMatrix RandomMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return DenseMatrix(rows, cols, RandomVector(rows * cols, seed));
}

inline LpInstance Generated(std::size_t m, std::size_t n, std::uint64_t seed,
                            bool presolve = true) {
  GeneratorSpec spec;
  spec.m = m;
  spec.n = n;
  spec.seed = seed;
  spec.presolve = presolve;
  return generate_instance(spec);
}

inline double RelErr(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace rpdhg::testing

#endif  // RPDHG_TESTS_TEST_UTIL_H_
