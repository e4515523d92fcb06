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


// Resilient routing: choose a base routing r and a protection routing p that
// minimize the worst link utilization mu over normal traffic plus the worst
// rerouted load from any F link failures. The inner maximization over failure
// scenarios is replaced by its dual (pi, lambda), giving one linear program in
// x = r (+) p (+) pi (+) lambda (+) mu.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "r3/constraints.hpp"
#include "r3/demand.hpp"
#include "r3/lp.hpp"
#include "r3/topology.hpp"
#include "r3/wireless.hpp"

namespace r3 {

struct R3Instance {
  VirtualizedTopology vt;
  /// Sized for the base or the derived vertex set; zero at virtual vertices.
  DemandMatrix demand;
  int F = 0;
  bool wireless = false;
  WirelessOptions wireless_options;
  RoutingOptions routing;
  /// Replaces the rows build_wireless_rows would produce (derived indices).
  std::optional<std::vector<GroupConstraintRow>> wireless_rows;
};

struct R3Options {
  LPOptions lp;
  /// Second solve with mu capped at its optimum, minimizing the sum over links
  /// of (load + pi-sum + F lambda) / c. Makes every per-link dual bound tight.
  bool refine = true;
  /// Cancel flow cycles in r after solving.
  bool cancel_cycles = false;
  /// Zero the demand of pairs with no path instead of failing.
  bool excuse_unreachable = false;
};

struct R3Layout {
  int n = 0;
  int num_links = 0;
  int r_offset = 0;
  int p_offset = 0;
  int pi_offset = 0;
  int lambda_offset = 0;
  int mu_index = 0;
  int num_vars = 0;
};

R3Layout r3_layout(int n, int num_links);

struct R3Program {
  LinearProgram lp;
  R3Layout layout;
  RoutingSystem routing;
  ProtectionSystem protection;
  std::vector<GroupConstraintRow> wireless_rows;
  int load_rows_begin = 0;      // first link-load row in a_le
  int dual_rows_begin = 0;      // first (l', l) dual row in a_le
  int wireless_rows_begin = 0;  // first group row in a_le
};

/// S[j][k] = 1 iff k = N * (j mod N) + floor(j / N), 0-based. Involutory.
SparseMatrix build_swap_matrix(int num_links);

/// Throws std::invalid_argument when the derived topology has parallel links,
/// F < 0, the demand is malformed or nonzero on virtual vertices.
/// `excused_pairs` are derived-vertex pairs exempt from routing.
R3Program assemble_r3lp(const R3Instance& inst,
                        const std::vector<std::pair<int, int>>& excused_pairs = {});

struct R3Solution {
  int n = 0;
  int num_links = 0;
  int F = 0;
  std::vector<double> r;    // n^2 N, RoutingIndexer layout
  std::vector<double> p;    // N^2, p[l * N + l'] = p_{s(l)t(l)}(l')
  std::vector<double> pi;   // N^2, pi[l * N + l'] = pi_l(l')
  std::vector<double> lam;  // N
  double mu = 0.0;
  double effective_mu = 0.0;
  std::vector<int> ignored_links;
  std::vector<std::pair<int, int>> excused_pairs;
  long iterations = 0;
  bool refined = false;

  double r_at(int a, int b, int l) const {
    return r[static_cast<std::size_t>((a * n + b) * num_links + l)];
  }
  double p_at(int l, int lp) const { return p[static_cast<std::size_t>(l) * num_links + lp]; }
  double pi_at(int l, int lp) const { return pi[static_cast<std::size_t>(l) * num_links + lp]; }
};

/// Raised when no pair of routings exists; `unreachable_pairs` lists demand
/// pairs (derived indices) without a path.
class R3Infeasible : public std::runtime_error {
 public:
  R3Infeasible(const std::string& what, std::vector<std::pair<int, int>> pairs)
      : std::runtime_error(what), unreachable_pairs(std::move(pairs)) {}
  std::vector<std::pair<int, int>> unreachable_pairs;
};

/// Throws R3Infeasible, std::invalid_argument on malformed input (including
/// a nonpositive capacity), and std::runtime_error when the LP solver fails.
R3Solution solve_r3(const R3Instance& inst, const R3Options& options = {});

/// Solves again on the derived topology without `failed` (derived link ids)
/// using budget `remaining_F`, and embeds the result in the full derived
/// indexing with zeros on failed links.
R3Solution resolve_after_failures(const R3Instance& inst, const std::vector<int>& failed,
                                  int remaining_F, const R3Options& options = {});

/// Diagonal entries p_{s(l)t(l)}(l) at or above 1 - this mark links that
/// carry no foreign traffic and need no protection.
inline constexpr double kDiagonalEps = 1e-9;

}  // namespace r3
