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

// Shared topologies and random generators for the unit and acceptance tests.
// Vertex and link arguments are 1-based here to match how the networks are
// usually drawn; the returned objects are 0-based like the rest of the
// library.

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "r3/r3core.hpp"
#include "r3/topology.hpp"

namespace r3::testing {

/// Links given as 1-based (src, tgt) pairs, one capacity for all.
Topology make_topology(int n, const std::vector<std::pair<int, int>>& links,
                       double capacity = 1.0);

/// 1 -> 2, 1 -> 3, 3 -> 2.
Topology three_node();

/// Six vertices, sixteen unit links; red {7, 8} at 3, violet {9, 10} at 4,
/// blue {11, 12, 13} at 5, cyan {14, 15, 16} at 6. Without groups every link
/// is its own group.
Topology six_node_wireless(bool with_groups = true);

/// Eight vertices, ten links leaving vertex 1 with parallel pairs to 2, 5
/// and 6. Groups red {1, 3, 5}, violet {2, 4, 7}, blue {6, 8, 9}, cyan {10}.
Topology parallel_star();

/// 1 -> 2, 2 -> 3, 1 -> 3.
Topology triangle(double capacity = 1.0);

/// Complete digraph on n vertices, links ordered by (src, tgt).
Topology complete(int n, double capacity = 1.0);

/// Strongly connected: a directed ring plus random extra links. Extra links
/// may be parallel to existing ones when allow_parallel is set.
Topology random_strong(std::mt19937_64& rng, int n, int num_links, bool allow_parallel,
                       double cap_lo = 1.0, double cap_hi = 4.0);

/// Uniform random demand on off-diagonal pairs.
DemandMatrix random_demand(std::mt19937_64& rng, int n, double lo, double hi);

/// Instance on `t` with the PageRank demand model at scale D.
R3Instance make_instance(const Topology& t, double D, int F, bool wireless = false);

}  // namespace r3::testing
