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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "rpdhg/dense_matrix.h"
#include "rpdhg/error.h"
#include "test_util.h"

namespace rpdhg {
namespace {

TEST_SUITE("dense_matrix") {

TEST_CASE("construction checks length and finiteness") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}), Error);
  const DenseMatrix z(2, 3);
  CHECK(z.entries().size() == 6);
  for (double v : z.entries()) CHECK(v == 0.0);
}

TEST_CASE("row-major layout, transpose, column selection") {
  const DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(a(0, 2) == 3.0);
  CHECK(a(1, 0) == 4.0);
  CHECK(a.row(1)[2] == 6.0);
  const DenseMatrix t = a.Transposed();
  CHECK(t.rows() == 3);
  CHECK(t(2, 1) == 6.0);
  CHECK(t.Transposed() == a);
  const std::vector<std::size_t> cols = {2, 0};
  const DenseMatrix s = a.SelectColumns(cols);
  CHECK(s == DenseMatrix(2, 2, {3, 1, 6, 4}));
  CHECK(a.FrobeniusNorm() == doctest::Approx(std::sqrt(91.0)));
}

TEST_CASE("identity") {
  const DenseMatrix i3 = DenseMatrix::Identity(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(i3(i, j) == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("vector helpers") {
  const Vector a = {3.0, -4.0};
  const Vector b = {1.0, 1.0};
  CHECK(Norm2(a) == doctest::Approx(5.0));
  CHECK(Norm1(a) == doctest::Approx(7.0));
  CHECK(Dot(a, b) == doctest::Approx(-1.0));
  CHECK(Distance(a, b) == doctest::Approx(std::sqrt(4.0 + 25.0)));
  // Scaled accumulation keeps huge and tiny entries representable.
  CHECK(Norm2(Vector{3e200, 4e200}) == doctest::Approx(5e200));
  CHECK(Norm2(Vector{3e-200, 4e-200}) == doctest::Approx(5e-200));
}

}  // TEST_SUITE

}  // namespace
}  // namespace rpdhg
