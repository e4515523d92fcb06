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


#include "r3/reconfig.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <limits>
#include <optional>
#include <stdexcept>

#include "r3/analysis.hpp"
#include "r3/r3core.hpp"

namespace r3 {

const char* to_string(DropReason reason) {
  switch (reason) {
    case DropReason::kUnprotected: return "unprotected";
    case DropReason::kPartial: return "partial";
    case DropReason::kNoDetour: return "no_detour";
    case DropReason::kUnreachable: return "unreachable";
  }
  return "unknown";
}

XiResult xi(const std::vector<double>& p, int num_links, int link) {
  if (static_cast<long>(p.size()) != static_cast<long>(num_links) * num_links) {
    throw std::invalid_argument("xi: protection matrix is not N x N");
  }
  if (link < 0 || link >= num_links) throw std::out_of_range("xi: link out of range");
  XiResult res;
  res.xi.assign(static_cast<std::size_t>(num_links), 0.0);
  const double* row = p.data() + static_cast<std::size_t>(link) * num_links;
  const double diag = row[link];
  if (diag >= 1.0 - kDiagonalEps) {
    res.unprotected = true;
    return res;
  }
  for (int l = 0; l < num_links; ++l) {
    if (l != link) res.xi[l] = row[l] / (1.0 - diag);
  }
  return res;
}

ReconfigState ReconfigState::make(std::shared_ptr<const Topology> topology,
                                  std::shared_ptr<const DemandMatrix> demand,
                                  std::vector<double> r, std::vector<double> p) {
  if (!topology || !demand) throw std::invalid_argument("ReconfigState: null topology or demand");
  const long n = topology->num_vertices();
  const long num = topology->num_links();
  if (demand->n != n) throw std::invalid_argument("ReconfigState: demand size differs from topology");
  if (static_cast<long>(r.size()) != n * n * num || static_cast<long>(p.size()) != num * num) {
    throw std::invalid_argument("ReconfigState: routing tensor sizes do not match topology");
  }
  ReconfigState s;
  s.topology = std::move(topology);
  s.demand = std::move(demand);
  s.r = std::move(r);
  s.p = std::move(p);
  s.active.assign(static_cast<std::size_t>(num), 1);
  s.initially_unprotected.assign(static_cast<std::size_t>(num), 0);
  for (long l = 0; l < num; ++l) {
    s.initially_unprotected[l] = s.p[l * num + l] >= 1.0 - kDiagonalEps;
  }
  return s;
}

ReconfigState ReconfigState::from_solution(const R3Solution& sol,
                                           std::shared_ptr<const Topology> topology,
                                           std::shared_ptr<const DemandMatrix> demand) {
  if (!topology || sol.n != topology->num_vertices() || sol.num_links != topology->num_links()) {
    throw std::invalid_argument("ReconfigState: solution was computed on a different topology");
  }
  return make(std::move(topology), std::move(demand), sol.r, sol.p);
}

namespace {

constexpr double kFlowTol = 1e-12;

// Breadth-first path from `from` to `to` over links carrying flow above
// kFlowTol. An empty path is returned when from == to.
std::optional<std::vector<int>> find_path(const double* flow, const Topology& t, int from, int to) {
  if (from == to) return std::vector<int>{};
  const int n = t.num_vertices();
  std::vector<int> via(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int l : t.out_links(v)) {
      if (flow[l] <= kFlowTol) continue;
      const int w = t.link(l).tgt;
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = l;
      if (w == to) {
        std::vector<int> path;
        for (int x = to; x != from; x = t.link(via[x]).src) path.push_back(via[x]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

double bottleneck(const double* flow, const std::vector<int>& path) {
  double m = std::numeric_limits<double>::infinity();
  for (int l : path) m = std::min(m, flow[l]);
  return m;
}

void subtract(double* flow, const std::vector<int>& path, double amount) {
  for (int l : path) {
    flow[l] -= amount;
    if (flow[l] < kFlowTol) flow[l] = 0.0;
  }
}

// Flow `amount` that reached s = src(failed) has no continuation and t =
// tgt(failed) is missing the same inflow. Remove it along t ~> s loops first,
// then along origin ~> s and t ~> dest walks. Returns the throughput lost.
double remove_stranded(double* flow, const Topology& t, int origin, int dest, int s, int tt,
                       double amount) {
  double remaining = amount;
  double lost = 0.0;
  const int guard_limit = 4 * t.num_links() + 8;
  for (int guard = 0; remaining > kFlowTol && guard < guard_limit; ++guard) {
    if (auto loop = find_path(flow, t, tt, s)) {
      const double delta = std::min(remaining, bottleneck(flow, *loop));
      subtract(flow, *loop, delta);
      remaining -= delta;
      continue;
    }
    auto back = find_path(flow, t, origin, s);
    auto fwd = find_path(flow, t, tt, dest);
    if (!back || !fwd) break;
    const double delta =
        std::min({remaining, bottleneck(flow, *back), bottleneck(flow, *fwd)});
    subtract(flow, *back, delta);
    subtract(flow, *fwd, delta);
    remaining -= delta;
    lost += delta;
  }
  return lost;
}

double net_outflow(const double* flow, const Topology& t, int a) {
  double s = 0.0;
  for (int l : t.out_links(a)) s += flow[l];
  for (int l : t.in_links(a)) s -= flow[l];
  return s;
}

std::vector<char> active_reachability(const Topology& t, const std::vector<char>& active) {
  const int n = t.num_vertices();
  std::vector<char> reach(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> stack;
  for (int a = 0; a < n; ++a) {
    char* row = reach.data() + static_cast<std::size_t>(a) * n;
    row[a] = 1;
    stack.assign(1, a);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int l : t.out_links(v)) {
        if (!active[l]) continue;
        const int w = t.link(l).tgt;
        if (!row[w]) {
          row[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return reach;
}

}  // namespace

void apply_failure_in_place(ReconfigState& state, int link) {
  const Topology& t = *state.topology;
  const int n = t.num_vertices();
  const int num = t.num_links();
  if (link < 0 || link >= num) {
    throw std::invalid_argument(fmt::format("link {} out of range", link + 1));
  }
  if (!state.active[link]) {
    throw std::invalid_argument(fmt::format("link {} already failed", link + 1));
  }
  const XiResult x = xi(state.p, num, link);
  const int s = t.link(link).src;
  const int tt = t.link(link).tgt;
  double mass = 0.0;
  if (!x.unprotected) {
    for (int l : t.out_links(s)) mass += x.xi[l];
    for (int l : t.in_links(s)) mass -= x.xi[l];
    mass = std::clamp(mass, 0.0, 1.0);
  }
  // Mass deficits at LP-tolerance level are noise, not lost protection.
  const bool partial = mass < 1.0 - kDiagonalEps;
  state.active[link] = 0;
  state.failed.push_back(link);
  const std::vector<char> reach = active_reachability(t, state.active);
  auto reason_for = [&](int a, int b) {
    if (!reach[static_cast<std::size_t>(a) * n + b]) return DropReason::kUnreachable;
    if (!reach[static_cast<std::size_t>(s) * n + tt]) return DropReason::kNoDetour;
    return x.unprotected ? DropReason::kUnprotected : DropReason::kPartial;
  };

  // Row `link` of p is read through x.xi only, so updating in place matches
  // the pre-failure formulas.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double* flow = state.r.data() + static_cast<std::size_t>(a * n + b) * num;
      const double f = flow[link];
      if (f == 0.0) continue;
      for (int l = 0; l < num; ++l) {
        if (x.xi[l] != 0.0) flow[l] += f * x.xi[l];
      }
      flow[link] = 0.0;
      if (partial) {
        const double lost = remove_stranded(flow, t, a, b, s, tt, f * (1.0 - mass));
        if (lost > kFlowTol) state.drops.push_back({link, a, b, lost, reason_for(a, b), -1});
      }
    }
  }
  for (int lq = 0; lq < num; ++lq) {
    if (!state.active[lq]) continue;
    double* row = state.p.data() + static_cast<std::size_t>(lq) * num;
    const double q = row[link];
    if (q == 0.0) continue;
    for (int l = 0; l < num; ++l) {
      if (x.xi[l] != 0.0) row[l] += q * x.xi[l];
    }
    row[link] = 0.0;
    if (partial) {
      const int ps = t.link(lq).src;
      const int pt = t.link(lq).tgt;
      const double lost = remove_stranded(row, t, ps, pt, s, tt, q * (1.0 - mass));
      if (lost > kFlowTol) state.drops.push_back({link, ps, pt, lost, reason_for(ps, pt), lq});
    }
  }
  for (int l = 0; l < num; ++l) {
    state.p[static_cast<std::size_t>(link) * num + l] = 0.0;
    state.p[static_cast<std::size_t>(l) * num + link] = 0.0;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || reach[static_cast<std::size_t>(a) * n + b]) continue;
      double* flow = state.r.data() + static_cast<std::size_t>(a * n + b) * num;
      const double net = net_outflow(flow, t, a);
      bool any = false;
      for (int l = 0; l < num; ++l) {
        any = any || flow[l] != 0.0;
        flow[l] = 0.0;
      }
      if (any) state.drops.push_back({link, a, b, net, DropReason::kUnreachable, -1});
    }
  }
  for (int lq = 0; lq < num; ++lq) {
    if (!state.active[lq]) continue;
    const Link& l = t.link(lq);
    if (reach[static_cast<std::size_t>(l.src) * n + l.tgt]) continue;
    double* row = state.p.data() + static_cast<std::size_t>(lq) * num;
    bool any = false;
    for (int k = 0; k < num; ++k) {
      any = any || row[k] != 0.0;
      row[k] = 0.0;
    }
    if (any) state.drops.push_back({link, l.src, l.tgt, 1.0, DropReason::kUnreachable, lq});
  }
}

ReconfigState apply_failure(const ReconfigState& state, int link) {
  ReconfigState next = state;
  apply_failure_in_place(next, link);
  return next;
}

ReconfigState apply_failures(const ReconfigState& state, const std::vector<int>& links) {
  ReconfigState next = state;
  for (int l : links) apply_failure_in_place(next, l);
  return next;
}

LinkLoadReport link_loads(const ReconfigState& state, ExecPolicy exec) {
  const Topology& t = *state.topology;
  LinkLoadReport rep;
  rep.load = routing_loads(t, *state.demand, state.r, exec);
  rep.utilization.assign(rep.load.size(), 0.0);
  for (int l = 0; l < t.num_links(); ++l) {
    if (!state.active[l]) {
      rep.load[l] = 0.0;
      continue;
    }
    const double c = t.link(l).capacity;
    rep.utilization[l] = c > 0.0 ? rep.load[l] / c
                                 : (rep.load[l] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (rep.argmax < 0 || rep.utilization[l] > rep.max_utilization) {
      rep.max_utilization = rep.utilization[l];
      rep.argmax = l;
    }
  }
  return rep;
}

}  // namespace r3
