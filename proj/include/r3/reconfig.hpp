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


// Online reconfiguration after link failures. When link l fails, its traffic
// is redistributed over its protection routing, normalized to exclude l:
//   xi_l(l') = p_l(l') / (1 - p_l(l')),   xi_l = 0 if p_l(l) = 1,
// applied to the base routing r and to every other link's protection routing.

#pragma once

#include <memory>
#include <vector>

#include "r3/demand.hpp"
#include "r3/kernels.hpp"
#include "r3/topology.hpp"

namespace r3 {

struct R3Solution;

struct XiResult {
  std::vector<double> xi;
  bool unprotected = false;  // p_l(l) >= 1 - kDiagonalEps
};

/// p is N x N with p[l * N + l'] = p_{s(l)t(l)}(l').
XiResult xi(const std::vector<double>& p, int num_links, int link);

enum class DropReason {
  kUnprotected,  // the failed link had no protection mass left
  kPartial,      // the protection routing delivered less than all of it
  kNoDetour,     // no surviving path joins the failed link's endpoints
  kUnreachable,  // the destination became unreachable
};

const char* to_string(DropReason reason);

/// Traffic removed during a failure. For base-routing drops (a, b) is the
/// demand pair and amount the dropped fraction of its unit flow; for
/// protection drops `protection_of` names the link whose routing lost mass.
struct DropEvent {
  int link = 0;
  int a = 0;
  int b = 0;
  double amount = 0.0;
  DropReason reason = DropReason::kUnprotected;
  int protection_of = -1;
};

struct ReconfigState {
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const DemandMatrix> demand;  // sized for topology
  std::vector<double> r;
  std::vector<double> p;
  std::vector<char> active;
  std::vector<int> failed;
  std::vector<char> initially_unprotected;
  std::vector<DropEvent> drops;

  /// Throws std::invalid_argument on size mismatches.
  static ReconfigState make(std::shared_ptr<const Topology> topology,
                            std::shared_ptr<const DemandMatrix> demand, std::vector<double> r,
                            std::vector<double> p);
  static ReconfigState from_solution(const R3Solution& sol,
                                     std::shared_ptr<const Topology> topology,
                                     std::shared_ptr<const DemandMatrix> demand);
};

/// Applies r' = r + r(l) xi_l and p' = p + p(l) xi_l using the pre-failure
/// tensors, then zeroes every entry indexed by l. If xi_l delivers less than
/// the full flow, the remainder is removed along positive-flow walks so that
/// conservation still holds at every interior vertex. Pairs whose
/// destination becomes unreachable are zeroed. Throws std::invalid_argument
/// if l is out of range or already failed.
void apply_failure_in_place(ReconfigState& state, int link);
ReconfigState apply_failure(const ReconfigState& state, int link);
ReconfigState apply_failures(const ReconfigState& state, const std::vector<int>& links);

struct LinkLoadReport {
  std::vector<double> load;
  std::vector<double> utilization;
  double max_utilization = 0.0;
  int argmax = -1;
};

/// Loads over active links; failed links report zero.
LinkLoadReport link_loads(const ReconfigState& state, ExecPolicy exec = ExecPolicy::kParallel);

}  // namespace r3
