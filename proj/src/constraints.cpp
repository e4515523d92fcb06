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

#include "r3/constraints.hpp"

#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace r3 {

const char* to_string(RowKind kind) {
  switch (kind) {
    case RowKind::kSelfPair: return "self_pair";
    case RowKind::kConservation: return "conservation";
    case RowKind::kOutTotality: return "out_totality";
    case RowKind::kInTotality: return "in_totality";
    case RowKind::kNoReturn: return "no_return";
    case RowKind::kNoExtension: return "no_extension";
    case RowKind::kExcused: return "excused";
  }
  return "unknown";
}

namespace {

struct RawRow {
  RowLabel label;
  std::vector<SparseEntry> entries;
  double rhs;
};

std::vector<RawRow> emit_rows(const Topology& t, const RoutingOptions& opt) {
  const int n = t.num_vertices();
  const RoutingIndexer ix{n, t.num_links()};
  std::set<std::pair<int, int>> excused(opt.excused_pairs.begin(), opt.excused_pairs.end());
  const bool full = opt.mode == ConstraintMode::kFull;
  std::vector<RawRow> rows;

  for (int a = 0; a < n; ++a) {
    for (int l = 0; l < t.num_links(); ++l) {
      rows.push_back({{RowKind::kSelfPair, a, a, l}, {{ix.index(a, a, l), 1.0}}, 0.0});
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || excused.count({a, b})) continue;
      for (int j = 0; j < n; ++j) {
        if (j == a || j == b || t.out_links(j).empty() || t.in_links(j).empty()) continue;
        RawRow row{{RowKind::kConservation, a, b, j}, {}, 0.0};
        for (int l : t.out_links(j)) row.entries.push_back({ix.index(a, b, l), 1.0});
        for (int l : t.in_links(j)) row.entries.push_back({ix.index(a, b, l), -1.0});
        rows.push_back(std::move(row));
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    if (t.is_graph_target(a)) continue;
    for (int b = 0; b < n; ++b) {
      if (a == b || excused.count({a, b})) continue;
      RawRow row{{RowKind::kOutTotality, a, b, -1}, {}, 1.0};
      for (int l : t.out_links(a)) row.entries.push_back({ix.index(a, b, l), 1.0});
      rows.push_back(std::move(row));
    }
  }
  if (full) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b || excused.count({a, b})) continue;
        const bool exempt = opt.guard == InTotalityGuard::kDestinationNotSource
                                ? t.is_graph_source(b)
                                : t.is_graph_target(b);
        if (exempt) continue;
        RawRow row{{RowKind::kInTotality, a, b, -1}, {}, 1.0};
        for (int l : t.in_links(b)) row.entries.push_back({ix.index(a, b, l), 1.0});
        rows.push_back(std::move(row));
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int l : t.in_links(a)) {
        rows.push_back({{RowKind::kNoReturn, a, b, l}, {{ix.index(a, b, l), 1.0}}, 0.0});
      }
    }
  }
  if (full) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        for (int l : t.out_links(b)) {
          rows.push_back({{RowKind::kNoExtension, a, b, l}, {{ix.index(a, b, l), 1.0}}, 0.0});
        }
      }
    }
  }
  for (auto [a, b] : opt.excused_pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw std::out_of_range(fmt::format("excused pair ({}, {}) out of range", a, b));
    }
    for (int l = 0; l < t.num_links(); ++l) {
      rows.push_back({{RowKind::kExcused, a, b, l}, {{ix.index(a, b, l), 1.0}}, 0.0});
    }
  }
  return rows;
}

std::string describe(const RowLabel& lb) {
  return fmt::format("{} row for pair ({}, {}){}", to_string(lb.kind), lb.a + 1, lb.b + 1,
                     lb.aux >= 0 ? fmt::format(" at {}", lb.aux + 1) : std::string());
}

RoutingSystem assemble(const Topology& t, const RoutingOptions& opt, bool prune) {
  RoutingSystem rs;
  rs.indexer = RoutingIndexer{t.num_vertices(), t.num_links()};
  rs.R = SparseMatrix(rs.indexer.size());
  std::vector<RawRow> rows = emit_rows(t, opt);

  // Key: normalized (col, value) bytes; value: kept row index.
  std::unordered_map<std::string, int> seen;
  for (RawRow& row : rows) {
    SparseMatrix one(rs.indexer.size());
    one.append_row(row.entries);
    auto cols = one.row_cols(0);
    auto vals = one.row_values(0);
    if (prune) {
      if (cols.empty()) {
        if (row.rhs == 0.0) continue;
        rs.conflicts.push_back({row.label, fmt::format("{} has no terms but rhs {}",
                                                       describe(row.label), row.rhs)});
      } else {
        const double sign = vals[0] > 0.0 ? 1.0 : -1.0;
        std::string key(cols.size() * (sizeof(int) + sizeof(double)), '\0');
        char* out = key.data();
        for (std::size_t k = 0; k < cols.size(); ++k) {
          const double v = sign * vals[k];
          std::memcpy(out, &cols[k], sizeof(int));
          std::memcpy(out + sizeof(int), &v, sizeof(double));
          out += sizeof(int) + sizeof(double);
        }
        auto [it, inserted] = seen.emplace(std::move(key), rs.R.rows());
        if (!inserted) {
          const int prev = it->second;
          const double prev_sign = rs.R.row_values(prev)[0] > 0.0 ? 1.0 : -1.0;
          if (prev_sign * rs.rho[prev] == sign * row.rhs) continue;
          rs.conflicts.push_back(
              {row.label, fmt::format("{} contradicts {}", describe(row.label),
                                      describe(rs.row_labels[prev]))});
        }
      }
    }
    rs.R.append_row(std::move(row.entries));
    rs.rho.push_back(row.rhs);
    rs.row_labels.push_back(row.label);
  }
  return rs;
}

}  // namespace

RoutingSystem build_routing_system(const Topology& t, const RoutingOptions& options) {
  return assemble(t, options, true);
}

RoutingSystem build_routing_system_unpruned(const Topology& t, const RoutingOptions& options) {
  return assemble(t, options, false);
}

ProtectionSystem build_protection_system(const RoutingSystem& rs, const Topology& t) {
  if (t.has_parallel_links()) {
    throw std::invalid_argument(
        "protection routing is ill-defined with parallel links; virtualize the topology first");
  }
  const int num = t.num_links();
  const RoutingIndexer& ix = rs.indexer;
  if (ix.n != t.num_vertices() || ix.num_links != num) {
    throw std::invalid_argument("routing system was built on a different topology");
  }
  // R column -> P column, or -1 when the column belongs to no link's pair.
  std::vector<int> p_col(static_cast<std::size_t>(ix.size()), -1);
  ProtectionSystem ps;
  for (const Link& l : t.links()) {
    for (int lp = 0; lp < num; ++lp) {
      p_col[ix.index(l.src, l.tgt, lp)] = l.id * num + lp;
      ps.column_labels.emplace_back(l.id, lp);
    }
  }
  ps.P = SparseMatrix(num * num);
  ps.rhs.resize(static_cast<std::size_t>(rs.num_rows()));
  ps.sigma_mask.resize(static_cast<std::size_t>(rs.num_rows()));
  for (int i = 0; i < rs.num_rows(); ++i) {
    auto cols = rs.R.row_cols(i);
    auto vals = rs.R.row_values(i);
    std::vector<SparseEntry> entries;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const int c = p_col[cols[k]];
      if (c >= 0) entries.push_back({c, vals[k]});
    }
    ps.sigma_mask[i] = entries.empty() ? 0.0 : 1.0;
    ps.rhs[i] = rs.rho[i] * ps.sigma_mask[i];
    ps.P.append_row(std::move(entries));
  }
  return ps;
}

std::vector<RoutingViolation> check_routing(const Topology& t, const std::vector<double>& r,
                                            const RoutingOptions& options, double tol) {
  const RoutingIndexer ix{t.num_vertices(), t.num_links()};
  if (static_cast<int>(r.size()) != ix.size()) {
    throw std::invalid_argument(
        fmt::format("check_routing: tensor has {} entries, expected {}", r.size(), ix.size()));
  }
  const RoutingSystem rs = build_routing_system_unpruned(t, options);
  const std::vector<double> lhs = rs.R.multiply(r);
  std::vector<RoutingViolation> out;
  for (int i = 0; i < rs.num_rows(); ++i) {
    const double res = lhs[i] - rs.rho[i];
    if (std::abs(res) > tol) out.push_back({rs.row_labels[i], res});
  }
  return out;
}

std::string routing_system_csv(const RoutingSystem& rs) {
  std::string out = "row,kind,a,b,aux,col,col_a,col_b,col_link,value,rhs\n";
  for (int i = 0; i < rs.num_rows(); ++i) {
    const RowLabel& lb = rs.row_labels[i];
    auto cols = rs.R.row_cols(i);
    auto vals = rs.R.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto tr = rs.indexer.triple(cols[k]);
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", i + 1, to_string(lb.kind), lb.a + 1,
                         lb.b + 1, lb.aux + 1, cols[k] + 1, tr.a + 1, tr.b + 1, tr.l + 1, vals[k],
                         rs.rho[i]);
    }
    if (cols.empty()) {
      out += fmt::format("{},{},{},{},{},,,,,0,{}\n", i + 1, to_string(lb.kind), lb.a + 1,
                         lb.b + 1, lb.aux + 1, rs.rho[i]);
    }
  }
  return out;
}

}  // namespace r3
