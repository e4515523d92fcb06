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


// Transmitter-capacity rows for point-to-multipoint groups. For a group g at
// vertex j the row bounds the traffic that j itself originates onto the
// group's links: sum over members l of d(j, t(l)) * r_{j t(l)}(sigma(l)) <= c_j(g).
// Vertex indices refer to the original topology; the link argument is the
// transmitter half in the virtualized one.

#pragma once

#include <string>
#include <vector>

#include "r3/demand.hpp"
#include "r3/topology.hpp"

namespace r3 {

struct WirelessOptions {
  /// Emit rows for single-member groups too (they duplicate link capacity).
  bool include_singletons = false;
  /// Count every origin-destination pair crossing the group's links, not only
  /// traffic originating at the transmitter.
  bool all_pairs = false;
  /// Bound by c_j(g) * mu instead of c_j(g).
  bool scale_by_mu = false;
};

/// Coefficient on r_ab(link) in the derived tensor.
struct GroupTerm {
  int a = 0;
  int b = 0;
  int link = 0;
  double coefficient = 0.0;
};

struct GroupConstraintRow {
  int vertex = 0;
  int group_id = 0;
  int group_index = 0;  // position in the base topology's group list
  std::string group_name;
  std::vector<GroupTerm> terms;
  double rhs = 0.0;
  bool scale_by_mu = false;
};

/// Demand may be sized for the base or the derived vertex set; entries at
/// virtual vertices must be zero. Throws std::invalid_argument on a nonzero
/// diagonal or mismatched size. Terms are in member-id order and keep zero
/// coefficients so the row's link set is visible.
std::vector<GroupConstraintRow> build_wireless_rows(const VirtualizedTopology& vt,
                                                    const DemandMatrix& d,
                                                    const WirelessOptions& options = {});

struct GroupLoad {
  int vertex = 0;
  int group_id = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double utilization = 0.0;  // lhs / rhs, +inf when rhs = 0 < lhs
};

/// r is the derived routing tensor. Throws std::invalid_argument on a size
/// mismatch.
std::vector<GroupLoad> evaluate_group_loads(const VirtualizedTopology& vt, const DemandMatrix& d,
                                            const std::vector<double>& r,
                                            const WirelessOptions& options = {});

/// Audit export: one line per term, "vertex,group,a,b,link,coefficient,rhs",
/// 1-based.
std::string wireless_rows_csv(const std::vector<GroupConstraintRow>& rows);

}  // namespace r3
