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

#include "r3/sparse.hpp"

#include <algorithm>

namespace r3 {

void SparseMatrix::append_row(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
  std::size_t k = 0;
  while (k < entries.size()) {
    const int col = entries[k].col;
    if (col < 0 || col >= cols_) {
      throw std::out_of_range("sparse row entry column out of range");
    }
    double sum = 0.0;
    while (k < entries.size() && entries[k].col == col) {
      sum += entries[k].value;
      ++k;
    }
    if (sum != 0.0) {
      col_idx_.push_back(col);
      values_.push_back(sum);
    }
  }
  row_ptr_.push_back(static_cast<int>(values_.size()));
}

double SparseMatrix::at(int i, int j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) {
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  }
  std::vector<double> y(static_cast<std::size_t>(rows()), 0.0);
  for (int i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      s += values_[k] * x[col_idx_[k]];
    }
    y[i] = s;
  }
  return y;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows()) * cols_, 0.0);
  for (int i = 0; i < rows(); ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      d[static_cast<std::size_t>(i) * cols_ + col_idx_[k]] = values_[k];
    }
  }
  return d;
}

void SparseMatrix::append_rows(const SparseMatrix& other) {
  if (other.cols_ != cols_) {
    throw std::invalid_argument("SparseMatrix::append_rows: column mismatch");
  }
  const int base = static_cast<int>(values_.size());
  col_idx_.insert(col_idx_.end(), other.col_idx_.begin(), other.col_idx_.end());
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  for (std::size_t i = 1; i < other.row_ptr_.size(); ++i) {
    row_ptr_.push_back(base + other.row_ptr_[i]);
  }
}

}  // namespace r3
