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

#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "r3/lp.hpp"

namespace r3 {

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
  lp.validate();
  const int n = lp.num_vars();
  const int meq = lp.a_eq.rows();
  const int mle = lp.a_le.rows();

  // Row i of the combined listing: equalities first, then inequalities.
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  auto gather = [&](const SparseMatrix& a, int offset) {
    for (int i = 0; i < a.rows(); ++i) {
      auto c = a.row_cols(i);
      auto v = a.row_values(i);
      for (std::size_t k = 0; k < c.size(); ++k) cols[c[k]].emplace_back(offset + i, v[k]);
    }
  };
  gather(lp.a_eq, 0);
  gather(lp.a_le, meq);

  out << "NAME          " << name << "\n";
  out << "ROWS\n N  OBJ\n";
  for (int i = 0; i < meq + mle; ++i) {
    out << (i < meq ? " E  " : " L  ") << "R" << i << "\n";
  }
  out << "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    const std::string col = fmt::format("C{}", j);
    if (lp.objective[j] != 0.0) {
      out << fmt::format("    {:<8}  {:<8}  {:.17g}\n", col, "OBJ", lp.objective[j]);
    }
    for (auto [r, v] : cols[j]) {
      out << fmt::format("    {:<8}  {:<8}  {:.17g}\n", col, fmt::format("R{}", r), v);
    }
  }
  out << "RHS\n";
  for (int i = 0; i < meq + mle; ++i) {
    const double b = i < meq ? lp.b_eq[i] : lp.b_le[i - meq];
    if (b != 0.0) out << fmt::format("    {:<8}  {:<8}  {:.17g}\n", "RHS", fmt::format("R{}", i), b);
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const std::string col = fmt::format("C{}", j);
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo == hi) {
      out << fmt::format(" FX BND       {:<8}  {:.17g}\n", col, lo);
      continue;
    }
    if (lo != 0.0) out << fmt::format(" LO BND       {:<8}  {:.17g}\n", col, lo);
    if (std::isfinite(hi)) out << fmt::format(" UP BND       {:<8}  {:.17g}\n", col, hi);
  }
  out << "ENDATA\n";
}

}  // namespace r3
