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


#include "r3/demand.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace r3 {

DemandMatrix DemandMatrix::embedded(int size) const {
  if (size < n) throw std::invalid_argument("DemandMatrix::embedded: target smaller than source");
  DemandMatrix d(size);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) d(a, b) = (*this)(a, b);
  }
  return d;
}

DemandMatrix DemandMatrix::scaled(double factor) const {
  DemandMatrix d = *this;
  for (double& v : d.values) v *= factor;
  return d;
}

double DemandMatrix::row_sum(int a) const {
  double s = 0.0;
  for (int b = 0; b < n; ++b) s += (*this)(a, b);
  return s;
}

void DemandMatrix::validate() const {
  if (static_cast<int>(values.size()) != n * n) {
    throw std::invalid_argument("demand matrix has inconsistent size");
  }
  for (int a = 0; a < n; ++a) {
    if ((*this)(a, a) != 0.0) {
      throw std::invalid_argument(fmt::format("demand matrix diagonal entry {} is nonzero", a + 1));
    }
    for (int b = 0; b < n; ++b) {
      const double v = (*this)(a, b);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(
            fmt::format("demand ({}, {}) = {} is negative or not finite", a + 1, b + 1, v));
      }
    }
  }
}

DemandMatrix derived_demand(const VirtualizedTopology& vt, const DemandMatrix& d) {
  d.validate();
  const int nb = vt.base.num_vertices();
  const int nd = vt.derived.num_vertices();
  if (d.n == nb) return d.embedded(nd);
  if (d.n != nd) {
    throw std::invalid_argument(
        fmt::format("demand has {} vertices, expected {} or {}", d.n, nb, nd));
  }
  for (int a = 0; a < nd; ++a) {
    for (int b = 0; b < nd; ++b) {
      if ((a >= nb || b >= nb) && d(a, b) != 0.0) {
        throw std::invalid_argument("demand on a virtual vertex must be zero");
      }
    }
  }
  return d;
}

std::vector<double> outbound_capacity(const Topology& t) {
  std::vector<double> out(static_cast<std::size_t>(t.num_vertices()), 0.0);
  for (const Link& l : t.links()) out[l.src] += l.capacity;
  return out;
}

std::vector<double> pagerank(const Topology& t, const DemandModel& model) {
  const int n = t.num_vertices();
  if (!(model.damping > 0.0 && model.damping < 1.0)) {
    throw std::invalid_argument("pagerank: damping must lie in (0, 1)");
  }
  if (n == 0) return {};
  const std::vector<double> outcap = outbound_capacity(t);
  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> next(static_cast<std::size_t>(n));
  const double d = model.damping;
  for (int it = 0; it < model.max_iter; ++it) {
    double dangling = 0.0;
    for (int a = 0; a < n; ++a) {
      if (outcap[a] <= 0.0) dangling += x[a];
    }
    const double base = (1.0 - d) / n + d * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (const Link& l : t.links()) {
      if (outcap[l.src] > 0.0) next[l.tgt] += d * x[l.src] * l.capacity / outcap[l.src];
    }
    double total = 0.0;
    for (double v : next) total += v;
    double change = 0.0;
    for (int a = 0; a < n; ++a) {
      next[a] /= total;
      change += std::abs(next[a] - x[a]);
    }
    x.swap(next);
    if (change < model.pagerank_tol) return x;
  }
  throw std::runtime_error(
      fmt::format("pagerank did not converge within {} iterations", model.max_iter));
}

DemandMatrix build_demand(const Topology& t, const DemandModel& model) {
  if (!(model.D > 0.0)) throw std::invalid_argument("build_demand: D must be positive");
  const int n = t.num_vertices();
  const std::vector<double> pr = pagerank(t, model);
  const std::vector<double> outcap = outbound_capacity(t);
  DemandMatrix d(n);
  for (int a = 0; a < n; ++a) {
    if (outcap[a] <= 0.0) continue;
    // Summing the off-diagonal mass directly keeps row sums exact even when
    // the iterate's total differs from 1 in the last bits.
    double rest = 0.0;
    for (int b = 0; b < n; ++b) {
      if (b != a) rest += pr[b];
    }
    if (rest <= 0.0) {
      throw std::domain_error(fmt::format("PageRank of vertex {} is 1", a + 1));
    }
    const double scale = model.renormalize ? model.D * outcap[a] / rest : model.D * outcap[a];
    for (int b = 0; b < n; ++b) {
      if (b != a) d(a, b) = scale * pr[b];
    }
  }
  return d;
}

}  // namespace r3
