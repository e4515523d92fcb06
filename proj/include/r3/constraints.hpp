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

// Linear systems whose solutions are routings. A routing r assigns to every
// ordered vertex pair (a, b) and link l the fraction r_ab(l) of a->b traffic
// carried by l. The tensor is flattened pair-major, link-minor.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "r3/sparse.hpp"
#include "r3/topology.hpp"

namespace r3 {

/// index(a, b, l) = (a * n + b) * N + l; a bijection onto [0, n^2 N).
struct RoutingIndexer {
  int n = 0;
  int num_links = 0;

  int size() const { return n * n * num_links; }
  int index(int a, int b, int l) const { return (a * n + b) * num_links + l; }
  int pair(int a, int b) const { return a * n + b; }
  struct Triple {
    int a, b, l;
  };
  Triple triple(int idx) const {
    const int l = idx % num_links;
    const int ab = idx / num_links;
    return {ab / n, ab % n, l};
  }
};

enum class RowKind {
  kSelfPair,        // r_aa(l) = 0
  kConservation,    // out-flow minus in-flow at an interior vertex j is 0
  kOutTotality,     // out-flow at a is 1
  kInTotality,      // in-flow at b is 1
  kNoReturn,        // r_ab(l) = 0 for links entering a
  kNoExtension,     // r_ab(l) = 0 for links leaving b
  kExcused,         // r_ab(l) = 0 for a pair excused from routing
};

const char* to_string(RowKind kind);

/// `aux` is the interior vertex for kConservation, the link for the
/// single-entry kinds, and -1 otherwise.
struct RowLabel {
  RowKind kind = RowKind::kSelfPair;
  int a = 0;
  int b = 0;
  int aux = -1;
};

enum class ConstraintMode {
  kFull,     // all six families
  kRelaxed,  // in-totality and no-extension rows omitted
};

/// Which vertices are exempt from the in-totality row. The printed guard
/// exempts destinations that are graph targets; the reading consistent with
/// the worked three-vertex example exempts destinations that are graph
/// sources (a destination without in-links cannot receive anything).
enum class InTotalityGuard { kDestinationNotSource, kDestinationNotTarget };

struct RoutingOptions {
  ConstraintMode mode = ConstraintMode::kFull;
  InTotalityGuard guard = InTotalityGuard::kDestinationNotSource;
  /// Pairs (a, b) that need no routing: their totality and conservation rows
  /// are replaced by r_ab = 0.
  std::vector<std::pair<int, int>> excused_pairs;
};

/// A row that no routing can satisfy: either all-zero with nonzero rhs, or a
/// duplicate of an earlier row with a different rhs.
struct StructuralConflict {
  RowLabel label;
  std::string description;
};

struct RoutingSystem {
  RoutingIndexer indexer;
  SparseMatrix R;
  std::vector<double> rho;
  std::vector<RowLabel> row_labels;
  std::vector<StructuralConflict> conflicts;

  int num_rows() const { return R.rows(); }
};

/// Rows in family order (self-pair, conservation, out-totality, in-totality,
/// no-return, no-extension, excused), then trivial and duplicate rows pruned
/// in encounter order. Entries are in {-1, 0, +1}.
RoutingSystem build_routing_system(const Topology& t, const RoutingOptions& options = {});

/// Same rows without pruning; used by check_routing so that every violated
/// scalar constraint is reported under its own label.
RoutingSystem build_routing_system_unpruned(const Topology& t,
                                            const RoutingOptions& options = {});

/// P p = rho (.) sigma_mask, where the column block of link l consists of the
/// columns of R labelled (s(l), t(l), .), and p[l * N + l'] = p_{s(l)t(l)}(l').
struct ProtectionSystem {
  SparseMatrix P;
  std::vector<double> rhs;
  std::vector<double> sigma_mask;
  std::vector<std::pair<int, int>> column_labels;  // (l, l')
};

/// Throws std::invalid_argument when t has parallel links.
ProtectionSystem build_protection_system(const RoutingSystem& rs, const Topology& t);

struct RoutingViolation {
  RowLabel label;
  double residual = 0.0;  // lhs - rhs
};

/// Every scalar routing constraint violated by more than `tol`. Throws
/// std::invalid_argument if r.size() != n^2 N.
std::vector<RoutingViolation> check_routing(const Topology& t, const std::vector<double>& r,
                                            const RoutingOptions& options = {},
                                            double tol = 1e-9);

/// Sparse triplet dump "row,col,value" followed by "rhs" and label columns.
std::string routing_system_csv(const RoutingSystem& rs);

}  // namespace r3
