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

#ifndef RPDHG_DENSE_MATRIX_H_
#define RPDHG_DENSE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace rpdhg {

using Vector = std::vector<double>;

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  // Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of `entries` (row-major). Throws kArgument when the length
  // does not match or an entry is not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {entries_.data() + i * cols_, cols_};
  }

  const double* data() const { return entries_.data(); }
  double* data() { return entries_.data(); }
  const std::vector<double>& entries() const { return entries_; }

  // Columns `indices` (in the given order) as a new rows x |indices| matrix.
  DenseMatrix SelectColumns(std::span<const std::size_t> indices) const;
  DenseMatrix Transposed() const;
  double FrobeniusNorm() const;
  bool AllFinite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Small vector helpers shared across modules. Not hot-loop code.
double Norm2(std::span<const double> v);
double Norm1(std::span<const double> v);
double Dot(std::span<const double> a, std::span<const double> b);
double Distance(std::span<const double> a, std::span<const double> b);

}  // namespace rpdhg

#endif  // RPDHG_DENSE_MATRIX_H_
