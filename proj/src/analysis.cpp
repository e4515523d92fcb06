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


#include "r3/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>

#include "r3/r3core.hpp"
#include "r3/reconfig.hpp"

namespace r3 {

std::vector<double> routing_loads(const Topology& t, const DemandMatrix& d,
                                  const std::vector<double>& r, ExecPolicy exec) {
  const int n = t.num_vertices();
  const int num = t.num_links();
  if (d.n != n) throw std::invalid_argument("routing_loads: demand size differs from topology");
  if (static_cast<long>(r.size()) != static_cast<long>(n) * n * num) {
    throw std::invalid_argument("routing_loads: routing tensor size differs from topology");
  }
  std::vector<double> load(static_cast<std::size_t>(num), 0.0);
  kernels::link_loads(d.values, r, num, load, exec);
  return load;
}

double knapsack_greedy(std::vector<double> chi, double F) {
  if (!(F >= 0.0)) throw std::invalid_argument("knapsack_greedy: F must be nonnegative");
  std::sort(chi.begin(), chi.end(), std::greater<>());
  double value = 0.0;
  double budget = F;
  for (double c : chi) {
    if (budget <= 0.0 || c <= 0.0) break;
    const double take = std::min(1.0, budget);
    value += take * c;
    budget -= take;
  }
  return value;
}

namespace {

std::vector<double> coefficients(const std::vector<double>& p, const std::vector<double>& capacity,
                                 double F, int link, bool carve_out) {
  const int num = static_cast<int>(capacity.size());
  if (static_cast<long>(p.size()) != static_cast<long>(num) * num) {
    throw std::invalid_argument("max_virtual_load: protection matrix is not N x N");
  }
  if (link < 0 || link >= num) throw std::out_of_range("max_virtual_load: link out of range");
  if (!(F >= 0.0)) throw std::invalid_argument("max_virtual_load: F must be nonnegative");
  std::vector<double> chi(static_cast<std::size_t>(num));
  for (int lq = 0; lq < num; ++lq) {
    if (!(capacity[lq] > 0.0)) {
      throw std::invalid_argument(fmt::format("max_virtual_load: link {} has capacity {}", lq + 1,
                                              capacity[lq]));
    }
    double v = p[static_cast<std::size_t>(lq) * num + link];
    if (carve_out && lq == link && v >= 1.0 - kDiagonalEps) v = 0.0;
    chi[lq] = capacity[lq] * v;
  }
  return chi;
}

}  // namespace

double max_virtual_load(const std::vector<double>& p, const std::vector<double>& capacity,
                        double F, int link, bool carve_out) {
  return knapsack_greedy(coefficients(p, capacity, F, link, carve_out), F);
}

double max_virtual_load_lp(const std::vector<double>& p, const std::vector<double>& capacity,
                           double F, int link, bool carve_out) {
  const std::vector<double> chi = coefficients(p, capacity, F, link, carve_out);
  const int num = static_cast<int>(chi.size());
  // Variables y = z / c in [0, 1]; maximize chi . y subject to sum y <= F.
  LinearProgram lp(num);
  std::vector<SparseEntry> row;
  for (int k = 0; k < num; ++k) {
    lp.objective[k] = -chi[k];
    lp.upper[k] = 1.0;
    row.push_back({k, 1.0});
  }
  lp.a_le.append_row(std::move(row));
  lp.b_le.push_back(F);
  const LPSolution s = solve_lp(lp);
  if (s.status != LPStatus::kOptimal) {
    throw std::runtime_error(fmt::format("max-load LP failed: {}", s.message));
  }
  return -s.objective_value;
}

std::vector<MaxLoadEntry> max_load_report(const R3Solution& sol, const Topology& derived,
                                          bool carve_out) {
  std::vector<double> cap;
  for (const Link& l : derived.links()) cap.push_back(l.capacity);
  std::vector<MaxLoadEntry> out;
  for (int l = 0; l < sol.num_links; ++l) {
    MaxLoadEntry e;
    e.link = l;
    e.greedy = max_virtual_load(sol.p, cap, sol.F, l, carve_out);
    e.lp = max_virtual_load_lp(sol.p, cap, sol.F, l, carve_out);
    for (int lq = 0; lq < sol.num_links; ++lq) e.dual += sol.pi_at(l, lq);
    e.dual += sol.F * sol.lam[l];
    e.carve_out = carve_out && sol.p_at(l, l) >= 1.0 - kDiagonalEps;
    out.push_back(e);
  }
  return out;
}

std::vector<double> worst_case_utilization(const R3Solution& sol, const Topology& derived,
                                           const DemandMatrix& d, bool carve_out,
                                           ExecPolicy exec) {
  std::vector<double> cap(static_cast<std::size_t>(sol.num_links));
  for (const Link& l : derived.links()) cap[l.id] = l.capacity;
  const std::vector<double> load = routing_loads(derived, d, sol.r, exec);
  std::vector<double> out(cap.size());
  for (int l = 0; l < sol.num_links; ++l) {
    out[l] = (load[l] + max_virtual_load(sol.p, cap, sol.F, l, carve_out)) / cap[l];
  }
  return out;
}

std::vector<DualityGap> duality_audit(const R3Solution& sol, const Topology& derived,
                                      const DemandMatrix& d) {
  std::vector<double> cap;
  for (const Link& l : derived.links()) cap.push_back(l.capacity);
  const std::vector<double> load = routing_loads(derived, d, sol.r);
  std::vector<DualityGap> out;
  for (int l = 0; l < sol.num_links; ++l) {
    DualityGap g;
    g.link = l;
    for (int lq = 0; lq < sol.num_links; ++lq) g.dual += sol.pi_at(l, lq);
    g.dual += sol.F * sol.lam[l];
    g.primal = max_virtual_load(sol.p, cap, sol.F, l, false);
    g.gap = g.dual - g.primal;
    const double bound = cap[l] * sol.mu;
    g.binding = load[l] + g.dual >= bound - 1e-7 * (1.0 + bound);
    out.push_back(g);
  }
  return out;
}

long binomial_prefix_sum(int n, int K) {
  long total = 0;
  long c = 1;
  for (int k = 0; k <= std::min(K, n); ++k) {
    total += c;
    c = c * (n - k) / (k + 1);
  }
  return total;
}

namespace {

struct ScenarioOutcome {
  double worst = 0.0;
  std::vector<ScenarioViolation> violations;
  long excused = 0;
  double order_deviation = 0.0;
  double order_deviation_with_drops = 0.0;
};

bool dropped_traffic(const ReconfigState& s) {
  for (const DropEvent& e : s.drops) {
    if (e.protection_of < 0 && e.amount > 1e-9) return true;
  }
  return false;
}

ScenarioOutcome run_scenario(const ReconfigState& base, const std::vector<int>& seq,
                             bool check_order, double tol) {
  ScenarioOutcome out;
  const ReconfigState state = apply_failures(base, seq);
  const LinkLoadReport rep = link_loads(state, ExecPolicy::kSerial);
  const Topology& t = *state.topology;
  const DemandMatrix& d = *state.demand;
  for (int l = 0; l < t.num_links(); ++l) {
    if (!state.active[l] || state.initially_unprotected[l]) continue;
    out.worst = std::max(out.worst, rep.utilization[l]);
    if (rep.utilization[l] > 1.0 + tol) {
      out.violations.push_back({seq, l, -1, -1, rep.utilization[l], "overload"});
    }
  }
  for (const DropEvent& e : state.drops) {
    if (e.protection_of >= 0 || d(e.a, e.b) <= 0.0 || e.amount <= 1e-9) continue;
    if (e.reason == DropReason::kUnreachable || e.reason == DropReason::kNoDetour ||
        base.initially_unprotected[e.link]) {
      ++out.excused;
    } else {
      out.violations.push_back({seq, e.link, e.a, e.b, e.amount, "drop"});
    }
  }
  if (check_order && seq.size() >= 2) {
    std::vector<int> perm = seq;
    std::sort(perm.begin(), perm.end());
    do {
      if (perm == seq) continue;
      const ReconfigState other = apply_failures(base, perm);
      double dev = 0.0;
      for (std::size_t k = 0; k < state.r.size(); ++k) {
        dev = std::max(dev, std::abs(other.r[k] - state.r[k]));
      }
      // Walk removal after a drop depends on the order of failures; only
      // drop-free sequences are held to order invariance.
      if (dropped_traffic(state) || dropped_traffic(other)) {
        out.order_deviation_with_drops = std::max(out.order_deviation_with_drops, dev);
        continue;
      }
      out.order_deviation = std::max(out.order_deviation, dev);
      if (dev > 1e-9) out.violations.push_back({perm, -1, -1, -1, dev, "order"});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

void combinations(int num, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  if (k > num) return;
  for (;;) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == num - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace

VerificationReport verify_congestion_free(const R3Solution& sol, const R3Instance& inst,
                                          const VerificationOptions& options) {
  auto topo = std::make_shared<const Topology>(inst.vt.derived);
  DemandMatrix d = derived_demand(inst.vt, inst.demand);
  for (auto [a, b] : sol.excused_pairs) d(a, b) = 0.0;
  auto demand = std::make_shared<const DemandMatrix>(std::move(d));
  const ReconfigState base = ReconfigState::from_solution(sol, topo, demand);
  const int num = topo->num_links();
  const int exhaustive = std::min(options.exhaustive_up_to, num);

  std::vector<std::vector<int>> scenarios;
  for (int k = 0; k <= exhaustive; ++k) combinations(num, k, scenarios);
  const std::size_t num_exhaustive = scenarios.size();
  std::mt19937_64 rng(options.seed);
  const int lo = std::min(exhaustive + 1, num);
  const int hi = std::min(std::max(sol.F, lo), num);
  if (lo > exhaustive) {
    for (int i = 0; i < options.sampled; ++i) {
      std::uniform_int_distribution<int> size_dist(lo, hi);
      const int k = size_dist(rng);
      std::vector<int> perm(static_cast<std::size_t>(num));
      for (int l = 0; l < num; ++l) perm[l] = l;
      std::shuffle(perm.begin(), perm.end(), rng);
      perm.resize(static_cast<std::size_t>(k));
      scenarios.push_back(std::move(perm));
    }
  }

  std::vector<ScenarioOutcome> outcomes(scenarios.size());
  const long count = static_cast<long>(scenarios.size());
  auto body = [&](long i) {
    const auto& seq = scenarios[i];
    const bool order = static_cast<std::size_t>(i) < num_exhaustive &&
                       static_cast<int>(seq.size()) <= options.order_check_up_to;
    outcomes[i] = run_scenario(base, seq, order, options.tolerance);
  };
  if (options.exec == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) body(i);
  } else {
    for (long i = 0; i < count; ++i) body(i);
  }

  VerificationReport rep;
  rep.scenarios = count;
  rep.expected_exhaustive = binomial_prefix_sum(num, exhaustive);
  std::size_t max_size = 0;
  for (const auto& s : scenarios) max_size = std::max(max_size, s.size());
  rep.worst_utilization.assign(max_size + 1, 0.0);
  for (long i = 0; i < count; ++i) {
    const ScenarioOutcome& o = outcomes[i];
    auto& w = rep.worst_utilization[scenarios[i].size()];
    w = std::max(w, o.worst);
    rep.excused_drops += o.excused;
    rep.max_order_deviation = std::max(rep.max_order_deviation, o.order_deviation);
    rep.max_order_deviation_with_drops =
        std::max(rep.max_order_deviation_with_drops, o.order_deviation_with_drops);
    for (const auto& v : o.violations) {
      if (v.kind == "order") rep.order_invariant = false;
      rep.violations.push_back(v);
    }
  }
  return rep;
}

namespace {

void check_conservation(const double* flow, const Topology& t, int a, int b) {
  for (int j = 0; j < t.num_vertices(); ++j) {
    if (j == a || j == b || t.in_links(j).empty() || t.out_links(j).empty()) continue;
    double net = 0.0;
    for (int l : t.out_links(j)) net += flow[l];
    for (int l : t.in_links(j)) net -= flow[l];
    if (std::abs(net) > 1e-9) {
      throw std::invalid_argument(fmt::format(
          "flow for pair ({}, {}) is not conserved at vertex {} (net {:.3e})", a + 1, b + 1,
          j + 1, net));
    }
  }
}

struct CycleSearch {
  const double* flow;
  const Topology& t;
  double tol;
  int start = 0;
  std::vector<char> on_path;
  std::vector<int> path;
  CycleReport report;

  void dfs(int v) {
    for (int l : t.out_links(v)) {
      if (report.truncated) return;
      if (flow[l] <= tol) continue;
      const int w = t.link(l).tgt;
      if (w < start) continue;
      if (w == start) {
        FlowCycle c;
        c.links = path;
        c.links.push_back(l);
        c.min_flow = flow[l];
        for (int k : path) c.min_flow = std::min(c.min_flow, flow[k]);
        report.cycles.push_back(std::move(c));
        if (report.cycles.size() >= kMaxCycles) report.truncated = true;
        continue;
      }
      if (on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(l);
      dfs(w);
      path.pop_back();
      on_path[w] = 0;
    }
  }
};

// A positive-flow path from `from` to `to`, or nullopt.
std::optional<std::vector<int>> support_path(const double* flow, const Topology& t, int from,
                                             int to, double tol) {
  const int n = t.num_vertices();
  std::vector<int> via(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) {
      std::vector<int> path;
      for (int x = to; x != from; x = t.link(via[x]).src) path.push_back(via[x]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int l : t.out_links(v)) {
      if (flow[l] <= tol) continue;
      const int w = t.link(l).tgt;
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = l;
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

void cancel_cycles(double* flow, const Topology& t, double tol) {
  for (bool found = true; found;) {
    found = false;
    for (int l = 0; l < t.num_links(); ++l) {
      if (flow[l] <= tol) continue;
      auto back = support_path(flow, t, t.link(l).tgt, t.link(l).src, tol);
      if (!back) continue;
      back->push_back(l);
      double m = flow[l];
      int arg = l;
      for (int k : *back) {
        if (flow[k] < m) {
          m = flow[k];
          arg = k;
        }
      }
      for (int k : *back) {
        flow[k] -= m;
        if (flow[k] < 0.0) flow[k] = 0.0;
      }
      flow[arg] = 0.0;
      found = true;
    }
  }
}

}  // namespace

CycleReport detect_cycles(const std::vector<double>& r, int a, int b, const Topology& t,
                          double tol) {
  const int n = t.num_vertices();
  const int num = t.num_links();
  if (static_cast<long>(r.size()) != static_cast<long>(n) * n * num) {
    throw std::invalid_argument("detect_cycles: routing tensor size differs from topology");
  }
  const double* flow = r.data() + static_cast<std::size_t>(a * n + b) * num;
  check_conservation(flow, t, a, b);
  CycleSearch search{flow, t, tol, 0, {}, {}, {}};
  search.on_path.assign(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n && !search.report.truncated; ++s) {
    search.start = s;
    search.on_path[s] = 1;
    search.dfs(s);
    search.on_path[s] = 0;
  }
  return search.report;
}

void remove_flow_cycles(std::vector<double>& flow, const Topology& t, double tol) {
  if (static_cast<int>(flow.size()) != t.num_links()) {
    throw std::invalid_argument("remove_flow_cycles: flow size differs from link count");
  }
  cancel_cycles(flow.data(), t, tol);
}

std::vector<double> remove_cycles(const std::vector<double>& r, const Topology& t, double tol) {
  const int n = t.num_vertices();
  const int num = t.num_links();
  if (static_cast<long>(r.size()) != static_cast<long>(n) * n * num) {
    throw std::invalid_argument("remove_cycles: routing tensor size differs from topology");
  }
  std::vector<double> out = r;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double* flow = out.data() + static_cast<std::size_t>(a * n + b) * num;
      check_conservation(flow, t, a, b);
      cancel_cycles(flow, t, tol);
    }
  }
  return out;
}

}  // namespace r3
