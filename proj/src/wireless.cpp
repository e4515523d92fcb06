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


#include "r3/wireless.hpp"

#include <fmt/format.h>
#include <limits>
#include <stdexcept>

#include "r3/constraints.hpp"

namespace r3 {

std::vector<GroupConstraintRow> build_wireless_rows(const VirtualizedTopology& vt,
                                                    const DemandMatrix& demand,
                                                    const WirelessOptions& options) {
  const DemandMatrix d = derived_demand(vt, demand);
  const int nd = d.n;
  std::vector<GroupConstraintRow> rows;
  const auto& groups = vt.base.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const P2MPGroup& grp = groups[g];
    if (grp.members.size() < 2 && !options.include_singletons) continue;
    GroupConstraintRow row;
    row.vertex = grp.vertex;
    row.group_id = grp.group_id;
    row.group_index = static_cast<int>(g);
    row.group_name = grp.name;
    row.rhs = grp.capacity;
    row.scale_by_mu = options.scale_by_mu;
    for (int m : grp.members) {
      const int link = vt.sigma.at(static_cast<std::size_t>(m));
      if (options.all_pairs) {
        for (int a = 0; a < nd; ++a) {
          for (int b = 0; b < nd; ++b) {
            if (a != b && d(a, b) > 0.0) row.terms.push_back({a, b, link, d(a, b)});
          }
        }
      } else {
        const int j = grp.vertex;
        const int t = vt.base.link(m).tgt;
        row.terms.push_back({j, t, link, d(j, t)});
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GroupLoad> evaluate_group_loads(const VirtualizedTopology& vt, const DemandMatrix& d,
                                            const std::vector<double>& r,
                                            const WirelessOptions& options) {
  const RoutingIndexer ix{vt.derived.num_vertices(), vt.derived.num_links()};
  if (static_cast<int>(r.size()) != ix.size()) {
    throw std::invalid_argument(
        fmt::format("routing tensor has {} entries, expected {}", r.size(), ix.size()));
  }
  std::vector<GroupLoad> out;
  for (const auto& row : build_wireless_rows(vt, d, options)) {
    GroupLoad gl{row.vertex, row.group_id, 0.0, row.rhs, 0.0};
    for (const auto& t : row.terms) gl.lhs += t.coefficient * r[ix.index(t.a, t.b, t.link)];
    if (gl.rhs > 0.0) {
      gl.utilization = gl.lhs / gl.rhs;
    } else {
      gl.utilization = gl.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.push_back(gl);
  }
  return out;
}

std::string wireless_rows_csv(const std::vector<GroupConstraintRow>& rows) {
  std::string out = "vertex,group,a,b,link,coefficient,rhs\n";
  for (const auto& row : rows) {
    for (const auto& t : row.terms) {
      out += fmt::format("{},{},{},{},{},{},{}\n", row.vertex + 1, row.group_id + 1, t.a + 1,
                         t.b + 1, t.link + 1, t.coefficient, row.rhs);
    }
  }
  return out;
}

}  // namespace r3
