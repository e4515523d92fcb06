// Copyright 2026 The r3 Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace r3 {

/// A single (column, value) pair of a sparse row.
struct SparseEntry {
  int col;
  double value;
};

/// Row-compressed sparse matrix built by appending rows. Entries within a row
/// are kept sorted by column; explicit zeros are dropped on insertion.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(int cols) : cols_(cols) {}

  int rows() const { return static_cast<int>(row_ptr_.size()) - 1; }
  int cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  /// Appends a row. Duplicate columns are summed.
  void append_row(std::vector<SparseEntry> entries);

  std::span<const int> row_cols(int i) const {
    return {col_idx_.data() + row_ptr_[i], col_idx_.data() + row_ptr_[i + 1]};
  }
  std::span<const double> row_values(int i) const {
    return {values_.data() + row_ptr_[i], values_.data() + row_ptr_[i + 1]};
  }

  double at(int i, int j) const;

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const;

  /// Dense row-major copy; intended for tests and small instances.
  std::vector<double> to_dense() const;

  /// Stacks `other` below this matrix; column counts must agree.
  void append_rows(const SparseMatrix& other);

 private:
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

}  // namespace r3
