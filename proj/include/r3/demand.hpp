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


// Traffic demand matrices and the PageRank-proportional demand model: vertex a
// sends in proportion to its outbound capacity, split over destinations b in
// proportion to the PageRank of b.

#pragma once

#include <vector>

#include "r3/topology.hpp"

namespace r3 {

/// Dense n x n matrix, row-major, d(a, a) = 0.
struct DemandMatrix {
  int n = 0;
  std::vector<double> values;

  DemandMatrix() = default;
  explicit DemandMatrix(int size)
      : n(size), values(static_cast<std::size_t>(size) * size, 0.0) {}

  double operator()(int a, int b) const { return values[static_cast<std::size_t>(a) * n + b]; }
  double& operator()(int a, int b) { return values[static_cast<std::size_t>(a) * n + b]; }

  /// Zero-padded copy on `size` >= n vertices.
  DemandMatrix embedded(int size) const;
  DemandMatrix scaled(double factor) const;
  double row_sum(int a) const;

  /// Throws std::invalid_argument on a nonzero diagonal, negative or
  /// non-finite entries.
  void validate() const;
};

struct DemandModel {
  double D = 1e-2;
  double damping = 0.85;
  double pagerank_tol = 1e-12;  // L1 change between iterates
  int max_iter = 100000;
  /// Divide each row by (1 - P(a)) so that it sums to D * outcap(a). When
  /// false, d_ab = D * outcap(a) * P(b) off the diagonal.
  bool renormalize = true;
};

/// Demand resized to the derived vertex set of `vt`. Accepts base- or
/// derived-sized input; throws std::invalid_argument on any other size, a
/// malformed matrix, or nonzero demand at a virtual vertex.
DemandMatrix derived_demand(const VirtualizedTopology& vt, const DemandMatrix& d);

/// Sum of capacities of links leaving each vertex.
std::vector<double> outbound_capacity(const Topology& t);

/// Stationary vector of the damped walk whose transition out of a vertex is
/// proportional to link capacity (parallel links summed). Vertices with no
/// outbound capacity jump uniformly. Throws std::runtime_error when not
/// converged within max_iter.
std::vector<double> pagerank(const Topology& t, const DemandModel& model = {});

/// Throws std::invalid_argument on an invalid model and std::domain_error if
/// some vertex with outbound capacity has P(a) = 1.
DemandMatrix build_demand(const Topology& t, const DemandModel& model = {});

}  // namespace r3
