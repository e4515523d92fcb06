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

// Data-parallel inner loops. Every kernel has a plain serial reference
// (`*_serial`) and an OpenMP version (`*_omp`); the dispatching overload picks
// one by ExecPolicy. Both variants accumulate in the same order, so their
// results are bitwise identical and the choice never changes solver output.

#pragma once

#include <cstddef>
#include <span>

namespace r3 {

enum class ExecPolicy { kSerial, kParallel };

/// Read-only view of a column-compressed matrix.
struct CscView {
  int rows = 0;
  int cols = 0;
  std::span<const int> col_ptr;
  std::span<const int> row_idx;
  std::span<const double> values;
};

namespace kernels {

// Product-form update of a dense row-major inverse after a basis change:
// row `pivot` is divided by alpha[pivot], then alpha[i] times it is
// subtracted from every other row.
void eta_update_serial(std::span<double> binv, int m, int pivot,
                       std::span<const double> alpha);
void eta_update_omp(std::span<double> binv, int m, int pivot,
                    std::span<const double> alpha);
void eta_update(std::span<double> binv, int m, int pivot,
                std::span<const double> alpha, ExecPolicy policy);

// y = weights^T * binv, skipping zero weights.
void weighted_row_sum_serial(std::span<const double> weights,
                             std::span<const double> binv, int m,
                             std::span<double> y);
void weighted_row_sum_omp(std::span<const double> weights,
                          std::span<const double> binv, int m,
                          std::span<double> y);
void weighted_row_sum(std::span<const double> weights,
                      std::span<const double> binv, int m, std::span<double> y,
                      ExecPolicy policy);

// out = binv * a, where a is a sparse column given by (rows, values).
void solve_column_serial(std::span<const double> binv, int m,
                         std::span<const int> rows,
                         std::span<const double> values, std::span<double> out);
void solve_column_omp(std::span<const double> binv, int m,
                      std::span<const int> rows, std::span<const double> values,
                      std::span<double> out);
void solve_column(std::span<const double> binv, int m,
                  std::span<const int> rows, std::span<const double> values,
                  std::span<double> out, ExecPolicy policy);

// reduced[j] = cost[j] - y . A_j for every column of A.
void price_columns_serial(const CscView& a, std::span<const double> y,
                          std::span<const double> cost,
                          std::span<double> reduced);
void price_columns_omp(const CscView& a, std::span<const double> y,
                       std::span<const double> cost, std::span<double> reduced);
void price_columns(const CscView& a, std::span<const double> y,
                   std::span<const double> cost, std::span<double> reduced,
                   ExecPolicy policy);

// load[l] = sum over pairs k of demand[k] * routing[k * num_links + l],
// where routing is the flattened (pair, link) tensor.
void link_loads_serial(std::span<const double> demand,
                       std::span<const double> routing, int num_links,
                       std::span<double> load);
void link_loads_omp(std::span<const double> demand,
                    std::span<const double> routing, int num_links,
                    std::span<double> load);
void link_loads(std::span<const double> demand, std::span<const double> routing,
                int num_links, std::span<double> load, ExecPolicy policy);

}  // namespace kernels
}  // namespace r3
