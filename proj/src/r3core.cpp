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


#include "r3/r3core.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>
#include <set>

#include "r3/analysis.hpp"

namespace r3 {

R3Layout r3_layout(int n, int num_links) {
  R3Layout lay;
  lay.n = n;
  lay.num_links = num_links;
  lay.r_offset = 0;
  lay.p_offset = n * n * num_links;
  lay.pi_offset = lay.p_offset + num_links * num_links;
  lay.lambda_offset = lay.pi_offset + num_links * num_links;
  lay.mu_index = lay.lambda_offset + num_links;
  lay.num_vars = lay.mu_index + 1;
  return lay;
}

SparseMatrix build_swap_matrix(int num_links) {
  if (num_links < 1) throw std::invalid_argument("build_swap_matrix: N must be positive");
  const int size = num_links * num_links;
  SparseMatrix s(size);
  for (int j = 0; j < size; ++j) {
    s.append_row({{num_links * (j % num_links) + j / num_links, 1.0}});
  }
  return s;
}

R3Program assemble_r3lp(const R3Instance& inst,
                        const std::vector<std::pair<int, int>>& excused_pairs) {
  const Topology& t = inst.vt.derived;
  if (t.has_parallel_links()) {
    throw std::invalid_argument("assemble_r3lp: derived topology has parallel links");
  }
  if (inst.F < 0) throw std::invalid_argument("assemble_r3lp: F must be nonnegative");
  const DemandMatrix d = derived_demand(inst.vt, inst.demand);
  const int n = t.num_vertices();
  const int num = t.num_links();

  R3Program prog;
  RoutingOptions ropt = inst.routing;
  ropt.excused_pairs.insert(ropt.excused_pairs.end(), excused_pairs.begin(), excused_pairs.end());
  prog.routing = build_routing_system(t, ropt);
  prog.protection = build_protection_system(prog.routing, t);
  prog.layout = r3_layout(n, num);
  const R3Layout& lay = prog.layout;
  const RoutingIndexer& ix = prog.routing.indexer;

  LinearProgram lp(lay.num_vars);
  lp.objective[lay.mu_index] = 1.0;
  for (int k = 0; k < lay.pi_offset; ++k) lp.upper[k] = 1.0;

  const RoutingSystem& rs = prog.routing;
  for (int i = 0; i < rs.num_rows(); ++i) {
    auto cols = rs.R.row_cols(i);
    auto vals = rs.R.row_values(i);
    std::vector<SparseEntry> row;
    for (std::size_t k = 0; k < cols.size(); ++k) row.push_back({lay.r_offset + cols[k], vals[k]});
    lp.a_eq.append_row(std::move(row));
    lp.b_eq.push_back(rs.rho[i]);
  }
  const ProtectionSystem& ps = prog.protection;
  for (int i = 0; i < ps.P.rows(); ++i) {
    auto cols = ps.P.row_cols(i);
    if (cols.empty() && ps.rhs[i] == 0.0) continue;
    auto vals = ps.P.row_values(i);
    std::vector<SparseEntry> row;
    for (std::size_t k = 0; k < cols.size(); ++k) row.push_back({lay.p_offset + cols[k], vals[k]});
    lp.a_eq.append_row(std::move(row));
    lp.b_eq.push_back(ps.rhs[i]);
  }

  // Link-load rows: actual load plus dual bound on rerouted load <= c mu.
  prog.load_rows_begin = lp.a_le.rows();
  for (int l = 0; l < num; ++l) {
    std::vector<SparseEntry> row;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (d(a, b) != 0.0) row.push_back({lay.r_offset + ix.index(a, b, l), d(a, b)});
      }
    }
    for (int lp2 = 0; lp2 < num; ++lp2) row.push_back({lay.pi_offset + l * num + lp2, 1.0});
    row.push_back({lay.lambda_offset + l, static_cast<double>(inst.F)});
    row.push_back({lay.mu_index, -t.link(l).capacity});
    lp.a_le.append_row(std::move(row));
    lp.b_le.push_back(0.0);
  }
  // Dual feasibility rows, ordered (l' outer, l inner):
  // c_{l'} p_{l'}(l) - pi_l(l') - lambda_l <= 0.
  prog.dual_rows_begin = lp.a_le.rows();
  for (int lq = 0; lq < num; ++lq) {
    for (int l = 0; l < num; ++l) {
      lp.a_le.append_row({{lay.p_offset + lq * num + l, t.link(lq).capacity},
                          {lay.pi_offset + l * num + lq, -1.0},
                          {lay.lambda_offset + l, -1.0}});
      lp.b_le.push_back(0.0);
    }
  }
  prog.wireless_rows_begin = lp.a_le.rows();
  if (inst.wireless) {
    prog.wireless_rows = inst.wireless_rows
                             ? *inst.wireless_rows
                             : build_wireless_rows(inst.vt, inst.demand, inst.wireless_options);
    for (const auto& wr : prog.wireless_rows) {
      std::vector<SparseEntry> row;
      for (const auto& term : wr.terms) {
        row.push_back({lay.r_offset + ix.index(term.a, term.b, term.link), term.coefficient});
      }
      if (wr.scale_by_mu) {
        row.push_back({lay.mu_index, -wr.rhs});
        lp.b_le.push_back(0.0);
      } else {
        lp.b_le.push_back(wr.rhs);
      }
      lp.a_le.append_row(std::move(row));
    }
  }
  prog.lp = std::move(lp);
  return prog;
}

namespace {

std::string pair_list(const std::vector<std::pair<int, int>>& pairs) {
  std::string s;
  for (auto [a, b] : pairs) {
    if (!s.empty()) s += ", ";
    s += fmt::format("({}, {})", a + 1, b + 1);
  }
  return s;
}

VirtualizedTopology identity_virtualization(const Topology& t) {
  VirtualizedTopology vt;
  vt.base = t;
  vt.derived = t;
  const int num = t.num_links();
  vt.sigma.resize(static_cast<std::size_t>(num));
  std::iota(vt.sigma.begin(), vt.sigma.end(), 0);
  vt.sigma_inv = vt.sigma;
  vt.origin = vt.sigma;
  vt.half_map.resize(static_cast<std::size_t>(num));
  for (int l = 0; l < num; ++l) vt.half_map[l].first = l;
  return vt;
}

}  // namespace

R3Solution solve_r3(const R3Instance& inst, const R3Options& options) {
  const Topology& t = inst.vt.derived;
  for (const Link& l : t.links()) {
    if (!(l.capacity > 0.0)) {
      throw std::invalid_argument(
          fmt::format("link {} has nonpositive capacity {}", l.id + 1, l.capacity));
    }
  }
  DemandMatrix d = derived_demand(inst.vt, inst.demand);
  const int n = t.num_vertices();
  const std::vector<char> reach = t.reachability();
  std::vector<std::pair<int, int>> unreachable;
  std::vector<std::pair<int, int>> excused;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || reach[static_cast<std::size_t>(a) * n + b]) continue;
      if (d(a, b) > 0.0) {
        unreachable.emplace_back(a, b);
      } else {
        excused.emplace_back(a, b);
      }
    }
  }
  R3Instance work = inst;
  if (!unreachable.empty()) {
    if (!options.excuse_unreachable) {
      throw R3Infeasible("demand between disconnected vertices: " + pair_list(unreachable),
                         unreachable);
    }
    for (auto [a, b] : unreachable) {
      d(a, b) = 0.0;
      excused.emplace_back(a, b);
    }
    std::sort(excused.begin(), excused.end());
    work.demand = d;
  }

  R3Program prog = assemble_r3lp(work, excused);
  if (!prog.routing.conflicts.empty()) {
    std::string msg = "routing constraints are structurally infeasible:";
    for (const auto& c : prog.routing.conflicts) msg += " " + c.description + ";";
    throw R3Infeasible(msg, {});
  }
  const R3Layout& lay = prog.layout;
  LPSolution s1 = solve_lp(prog.lp, options.lp);
  if (s1.status == LPStatus::kInfeasible) {
    throw R3Infeasible("R3 linear program is infeasible: " + s1.message, {});
  }
  if (s1.status != LPStatus::kOptimal) {
    throw std::runtime_error(fmt::format("R3 linear program not solved ({}): {}",
                                         to_string(s1.status), s1.message));
  }

  R3Solution sol;
  sol.n = n;
  sol.num_links = t.num_links();
  sol.F = inst.F;
  sol.mu = s1.x[lay.mu_index];
  sol.iterations = s1.iterations;
  std::vector<double> x = s1.x;

  if (options.refine) {
    LinearProgram lp2 = prog.lp;
    lp2.upper[lay.mu_index] = sol.mu + 1e-9 * (1.0 + sol.mu);
    std::fill(lp2.objective.begin(), lp2.objective.end(), 0.0);
    const RoutingIndexer ix{n, sol.num_links};
    for (int l = 0; l < sol.num_links; ++l) {
      const double w = 1.0 / t.link(l).capacity;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) lp2.objective[lay.r_offset + ix.index(a, b, l)] += w * d(a, b);
      }
      for (int lq = 0; lq < sol.num_links; ++lq) {
        lp2.objective[lay.pi_offset + l * sol.num_links + lq] += w;
      }
      lp2.objective[lay.lambda_offset + l] += w * inst.F;
    }
    LPSolution s2 = solve_lp(lp2, options.lp);
    sol.iterations += s2.iterations;
    if (s2.status == LPStatus::kOptimal) {
      x = std::move(s2.x);
      sol.refined = true;
    }
  }

  sol.r.assign(x.begin() + lay.r_offset, x.begin() + lay.p_offset);
  sol.p.assign(x.begin() + lay.p_offset, x.begin() + lay.pi_offset);
  sol.pi.assign(x.begin() + lay.pi_offset, x.begin() + lay.lambda_offset);
  sol.lam.assign(x.begin() + lay.lambda_offset, x.begin() + lay.mu_index);
  sol.excused_pairs = excused;
  if (options.cancel_cycles) sol.r = remove_cycles(sol.r, t);

  for (int l = 0; l < sol.num_links; ++l) {
    if (sol.p_at(l, l) >= 1.0 - kDiagonalEps) sol.ignored_links.push_back(l);
  }
  double eff = 0.0;
  for (double u : worst_case_utilization(sol, t, d, true, options.lp.exec)) eff = std::max(eff, u);
  sol.effective_mu = eff;
  return sol;
}

R3Solution resolve_after_failures(const R3Instance& inst, const std::vector<int>& failed,
                                  int remaining_F, const R3Options& options) {
  const Topology& t = inst.vt.derived;
  const int num = t.num_links();
  std::set<int> uniq;
  for (int l : failed) {
    if (l < 0 || l >= num) throw std::out_of_range(fmt::format("failed link {} out of range", l + 1));
    if (!uniq.insert(l).second) {
      throw std::invalid_argument(fmt::format("link {} listed twice", l + 1));
    }
  }
  if (remaining_F < 0) throw std::invalid_argument("remaining_F must be nonnegative");
  std::vector<int> kept;
  const Topology survivor = t.without_links(failed, &kept);
  std::vector<int> new_id(static_cast<std::size_t>(num), -1);
  for (std::size_t k = 0; k < kept.size(); ++k) new_id[kept[k]] = static_cast<int>(k);

  R3Instance next;
  next.vt = identity_virtualization(survivor);
  next.demand = derived_demand(inst.vt, inst.demand);
  next.F = remaining_F;
  next.routing = inst.routing;
  next.wireless = inst.wireless;
  next.wireless_options = inst.wireless_options;
  if (inst.wireless) {
    std::vector<GroupConstraintRow> rows =
        inst.wireless_rows ? *inst.wireless_rows
                           : build_wireless_rows(inst.vt, inst.demand, inst.wireless_options);
    for (auto& row : rows) {
      std::vector<GroupTerm> terms;
      for (auto term : row.terms) {
        if (new_id[term.link] < 0) continue;
        term.link = new_id[term.link];
        terms.push_back(term);
      }
      row.terms = std::move(terms);
    }
    next.wireless_rows = std::move(rows);
  }

  const R3Solution part = solve_r3(next, options);
  R3Solution sol;
  sol.n = part.n;
  sol.num_links = num;
  sol.F = remaining_F;
  sol.mu = part.mu;
  sol.effective_mu = part.effective_mu;
  sol.iterations = part.iterations;
  sol.refined = part.refined;
  sol.excused_pairs = part.excused_pairs;
  const int m = part.num_links;
  const int n = part.n;
  sol.r.assign(static_cast<std::size_t>(n) * n * num, 0.0);
  sol.p.assign(static_cast<std::size_t>(num) * num, 0.0);
  sol.pi.assign(static_cast<std::size_t>(num) * num, 0.0);
  sol.lam.assign(static_cast<std::size_t>(num), 0.0);
  for (int ab = 0; ab < n * n; ++ab) {
    for (int l = 0; l < m; ++l) {
      sol.r[static_cast<std::size_t>(ab) * num + kept[l]] = part.r[static_cast<std::size_t>(ab) * m + l];
    }
  }
  for (int l = 0; l < m; ++l) {
    sol.lam[kept[l]] = part.lam[l];
    for (int lq = 0; lq < m; ++lq) {
      sol.p[static_cast<std::size_t>(kept[l]) * num + kept[lq]] = part.p_at(l, lq);
      sol.pi[static_cast<std::size_t>(kept[l]) * num + kept[lq]] = part.pi_at(l, lq);
    }
  }
  for (int l : part.ignored_links) sol.ignored_links.push_back(kept[l]);
  return sol;
}

}  // namespace r3
