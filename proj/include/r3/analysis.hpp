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


// Independent checks on resilient-routing solutions: the worst rerouted load
// a link can see, per-link duality gaps, brute-force failure verification, and
// flow-cycle detection.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r3/demand.hpp"
#include "r3/kernels.hpp"
#include "r3/lp.hpp"
#include "r3/topology.hpp"

namespace r3 {

struct R3Instance;
struct R3Solution;

/// load[l] = sum over (a, b) of d(a, b) * r_ab(l); d sized for t.
std::vector<double> routing_loads(const Topology& t, const DemandMatrix& d,
                                  const std::vector<double>& r,
                                  ExecPolicy exec = ExecPolicy::kParallel);

/// max sum_{l'} z_{l'} p_{s(l')t(l')}(l) over 0 <= z <= c, sum z / c <= F.
/// Greedy: the floor(F) largest coefficients c_{l'} p_{l'}(l) plus the
/// fractional remainder of the next one. With carve_out, entries
/// p_{l'}(l') >= 1 - eps are treated as zero. Throws std::invalid_argument on a
/// nonpositive capacity or negative F.
double max_virtual_load(const std::vector<double>& p, const std::vector<double>& capacity,
                        double F, int link, bool carve_out);

/// The same value computed by solve_lp on the explicit knapsack polytope.
double max_virtual_load_lp(const std::vector<double>& p, const std::vector<double>& capacity,
                           double F, int link, bool carve_out);

/// Greedy maximum of sum_i y_i * chi_i over 0 <= y <= 1, sum y <= F.
double knapsack_greedy(std::vector<double> chi, double F);

struct MaxLoadEntry {
  int link = 0;
  double greedy = 0.0;
  double lp = 0.0;
  double dual = 0.0;  // sum_{l'} pi_l(l') + F lambda_l
  bool carve_out = false;
};

std::vector<MaxLoadEntry> max_load_report(const R3Solution& sol, const Topology& derived,
                                          bool carve_out);

/// (load + max virtual load) / capacity per derived link under the solution's
/// own failure budget. The maximum over links is the solution's effective mu
/// when carve_out is set.
std::vector<double> worst_case_utilization(const R3Solution& sol, const Topology& derived,
                                           const DemandMatrix& d, bool carve_out,
                                           ExecPolicy exec = ExecPolicy::kParallel);

struct DualityGap {
  int link = 0;
  double dual = 0.0;
  double primal = 0.0;  // max_virtual_load without carve-out
  double gap = 0.0;     // dual - primal
  bool binding = false;  // the link-load row holds with equality
};

std::vector<DualityGap> duality_audit(const R3Solution& sol, const Topology& derived,
                                      const DemandMatrix& d);

struct VerificationOptions {
  int exhaustive_up_to = 1;
  int sampled = 0;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
  int order_check_up_to = 3;
  ExecPolicy exec = ExecPolicy::kParallel;
};

struct ScenarioViolation {
  std::vector<int> failures;  // derived link ids in application order
  int link = -1;              // overloaded link, or -1 for a dropped demand
  int a = -1;
  int b = -1;
  double value = 0.0;  // utilization, or dropped fraction of the pair
  std::string kind;    // "overload" | "drop" | "order"
};

struct VerificationReport {
  long scenarios = 0;
  long expected_exhaustive = 0;
  std::vector<double> worst_utilization;  // by scenario size
  std::vector<ScenarioViolation> violations;
  long excused_drops = 0;
  bool order_invariant = true;
  double max_order_deviation = 0.0;
  // Orderings where some traffic was dropped are reported but not judged.
  double max_order_deviation_with_drops = 0.0;

  bool passed() const { return violations.empty(); }
};

/// Fails every subset of at most `exhaustive_up_to` active links (plus
/// `sampled` random longer sequences), reconfigures, and checks that no
/// non-ignored link exceeds 1 + tolerance utilization. Drops are excused when
/// the pair is disconnected, the failed link's endpoints are disconnected, or
/// the failed link was unprotected from the start; other drops of positive
/// demand are violations. For subsets of size up to order_check_up_to, every
/// drop-free ordering must give the same r within 1e-9.
VerificationReport verify_congestion_free(const R3Solution& sol, const R3Instance& inst,
                                          const VerificationOptions& options = {});

/// sum_{k=0}^{K} C(n, k).
long binomial_prefix_sum(int n, int K);

struct FlowCycle {
  std::vector<int> links;
  double min_flow = 0.0;
};

struct CycleReport {
  std::vector<FlowCycle> cycles;
  bool truncated = false;
};

inline constexpr std::size_t kMaxCycles = 10000;

/// Elementary cycles in the positive support of r_ab. Throws
/// std::invalid_argument if r_ab violates conservation at an interior vertex.
CycleReport detect_cycles(const std::vector<double>& r, int a, int b, const Topology& t,
                          double tol = 1e-12);

/// Subtracts the bottleneck flow around cycles until every pair's support is
/// acyclic. Preserves conservation and each pair's net throughput.
std::vector<double> remove_cycles(const std::vector<double>& r, const Topology& t,
                                  double tol = 1e-12);

/// Same for a single flow vector over links.
void remove_flow_cycles(std::vector<double>& flow, const Topology& t, double tol = 1e-12);

}  // namespace r3
