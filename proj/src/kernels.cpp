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

#include "r3/kernels.hpp"

#include <algorithm>

namespace r3::kernels {
namespace {

// Below this many scalar operations the OpenMP fork/join costs more than it
// saves; the omp variants fall through to a single thread.
constexpr long kParallelThreshold = 1L << 14;

}  // namespace

void eta_update_serial(std::span<double> binv, int m, int pivot,
                       std::span<const double> alpha) {
  double* prow = binv.data() + static_cast<std::size_t>(pivot) * m;
  const double inv = 1.0 / alpha[pivot];
  for (int k = 0; k < m; ++k) prow[k] *= inv;
  for (int i = 0; i < m; ++i) {
    if (i == pivot) continue;
    const double f = alpha[i];
    if (f == 0.0) continue;
    double* row = binv.data() + static_cast<std::size_t>(i) * m;
    for (int k = 0; k < m; ++k) row[k] -= f * prow[k];
  }
}

void eta_update_omp(std::span<double> binv, int m, int pivot,
                    std::span<const double> alpha) {
  double* prow = binv.data() + static_cast<std::size_t>(pivot) * m;
  const double inv = 1.0 / alpha[pivot];
  for (int k = 0; k < m; ++k) prow[k] *= inv;
  double* base = binv.data();
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * m > kParallelThreshold)
  for (int i = 0; i < m; ++i) {
    if (i == pivot) continue;
    const double f = alpha[i];
    if (f == 0.0) continue;
    double* row = base + static_cast<std::size_t>(i) * m;
    for (int k = 0; k < m; ++k) row[k] -= f * prow[k];
  }
}

void eta_update(std::span<double> binv, int m, int pivot,
                std::span<const double> alpha, ExecPolicy policy) {
  if (policy == ExecPolicy::kParallel) {
    eta_update_omp(binv, m, pivot, alpha);
  } else {
    eta_update_serial(binv, m, pivot, alpha);
  }
}

void weighted_row_sum_serial(std::span<const double> weights,
                             std::span<const double> binv, int m,
                             std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < m; ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    const double* row = binv.data() + static_cast<std::size_t>(i) * m;
    for (int k = 0; k < m; ++k) y[k] += w * row[k];
  }
}

void weighted_row_sum_omp(std::span<const double> weights,
                          std::span<const double> binv, int m,
                          std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  constexpr int kBlock = 256;
  const int blocks = (m + kBlock - 1) / kBlock;
  long active = 0;
  for (int i = 0; i < m; ++i) active += weights[i] != 0.0;
#pragma omp parallel for schedule(static) if (active * m > kParallelThreshold)
  for (int b = 0; b < blocks; ++b) {
    const int lo = b * kBlock;
    const int hi = std::min(m, lo + kBlock);
    for (int i = 0; i < m; ++i) {
      const double w = weights[i];
      if (w == 0.0) continue;
      const double* row = binv.data() + static_cast<std::size_t>(i) * m;
      for (int k = lo; k < hi; ++k) y[k] += w * row[k];
    }
  }
}

void weighted_row_sum(std::span<const double> weights,
                      std::span<const double> binv, int m, std::span<double> y,
                      ExecPolicy policy) {
  if (policy == ExecPolicy::kParallel) {
    weighted_row_sum_omp(weights, binv, m, y);
  } else {
    weighted_row_sum_serial(weights, binv, m, y);
  }
}

void solve_column_serial(std::span<const double> binv, int m,
                         std::span<const int> rows,
                         std::span<const double> values,
                         std::span<double> out) {
  const std::size_t nz = rows.size();
  for (int i = 0; i < m; ++i) {
    const double* row = binv.data() + static_cast<std::size_t>(i) * m;
    double s = 0.0;
    for (std::size_t t = 0; t < nz; ++t) s += row[rows[t]] * values[t];
    out[i] = s;
  }
}

void solve_column_omp(std::span<const double> binv, int m,
                      std::span<const int> rows, std::span<const double> values,
                      std::span<double> out) {
  const std::size_t nz = rows.size();
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * static_cast<long>(nz) > kParallelThreshold)
  for (int i = 0; i < m; ++i) {
    const double* row = binv.data() + static_cast<std::size_t>(i) * m;
    double s = 0.0;
    for (std::size_t t = 0; t < nz; ++t) s += row[rows[t]] * values[t];
    out[i] = s;
  }
}

void solve_column(std::span<const double> binv, int m,
                  std::span<const int> rows, std::span<const double> values,
                  std::span<double> out, ExecPolicy policy) {
  if (policy == ExecPolicy::kParallel) {
    solve_column_omp(binv, m, rows, values, out);
  } else {
    solve_column_serial(binv, m, rows, values, out);
  }
}

void price_columns_serial(const CscView& a, std::span<const double> y,
                          std::span<const double> cost,
                          std::span<double> reduced) {
  for (int j = 0; j < a.cols; ++j) {
    double s = cost[j];
    for (int k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      s -= y[a.row_idx[k]] * a.values[k];
    }
    reduced[j] = s;
  }
}

void price_columns_omp(const CscView& a, std::span<const double> y,
                       std::span<const double> cost, std::span<double> reduced) {
#pragma omp parallel for schedule(static) if (static_cast<long>(a.values.size()) > kParallelThreshold)
  for (int j = 0; j < a.cols; ++j) {
    double s = cost[j];
    for (int k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      s -= y[a.row_idx[k]] * a.values[k];
    }
    reduced[j] = s;
  }
}

void price_columns(const CscView& a, std::span<const double> y,
                   std::span<const double> cost, std::span<double> reduced,
                   ExecPolicy policy) {
  if (policy == ExecPolicy::kParallel) {
    price_columns_omp(a, y, cost, reduced);
  } else {
    price_columns_serial(a, y, cost, reduced);
  }
}

void link_loads_serial(std::span<const double> demand,
                       std::span<const double> routing, int num_links,
                       std::span<double> load) {
  std::fill(load.begin(), load.end(), 0.0);
  const std::size_t pairs = demand.size();
  for (std::size_t k = 0; k < pairs; ++k) {
    const double d = demand[k];
    if (d == 0.0) continue;
    const double* r = routing.data() + k * num_links;
    for (int l = 0; l < num_links; ++l) load[l] += d * r[l];
  }
}

void link_loads_omp(std::span<const double> demand,
                    std::span<const double> routing, int num_links,
                    std::span<double> load) {
  const std::size_t pairs = demand.size();
#pragma omp parallel for schedule(static) if (static_cast<long>(pairs) * num_links > kParallelThreshold)
  for (int l = 0; l < num_links; ++l) {
    double s = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
      const double d = demand[k];
      if (d == 0.0) continue;
      s += d * routing[k * num_links + l];
    }
    load[l] = s;
  }
}

void link_loads(std::span<const double> demand, std::span<const double> routing,
                int num_links, std::span<double> load, ExecPolicy policy) {
  if (policy == ExecPolicy::kParallel) {
    link_loads_omp(demand, routing, num_links, load);
  } else {
    link_loads_serial(demand, routing, num_links, load);
  }
}

}  // namespace r3::kernels
