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

#include "fixtures.hpp"

#include <set>

#include "r3/demand.hpp"

namespace r3::testing {

Topology make_topology(int n, const std::vector<std::pair<int, int>>& links, double capacity) {
  std::vector<Link> ls;
  for (auto [s, t] : links) ls.push_back({0, s - 1, t - 1, capacity});
  return Topology(n, std::move(ls)).with_singleton_groups();
}

Topology three_node() { return make_topology(3, {{1, 2}, {1, 3}, {3, 2}}); }

Topology six_node_wireless(bool with_groups) {
  const std::vector<std::pair<int, int>> e = {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2},
                                              {3, 5}, {3, 6}, {4, 5}, {4, 6}, {5, 3}, {5, 4},
                                              {5, 6}, {6, 3}, {6, 4}, {6, 5}};
  std::vector<Link> ls;
  for (auto [s, t] : e) ls.push_back({0, s - 1, t - 1, 1.0});
  std::vector<P2MPGroup> groups;
  if (with_groups) {
    groups.push_back({2, 0, {6, 7}, 1.0, "red"});
    groups.push_back({3, 0, {8, 9}, 1.0, "violet"});
    groups.push_back({4, 0, {10, 11, 12}, 1.0, "blue"});
    groups.push_back({5, 0, {13, 14, 15}, 1.0, "cyan"});
  }
  return Topology(6, std::move(ls), std::move(groups)).with_singleton_groups();
}

Topology parallel_star() {
  const std::vector<int> tgt = {2, 2, 3, 4, 5, 5, 6, 6, 7, 8};
  std::vector<Link> ls;
  for (int t : tgt) ls.push_back({0, 0, t - 1, 1.0});
  std::vector<P2MPGroup> groups = {
      {0, 0, {0, 2, 4}, 1.0, "red"},
      {0, 1, {1, 3, 6}, 1.0, "violet"},
      {0, 2, {5, 7, 8}, 1.0, "blue"},
      {0, 3, {9}, 1.0, "cyan"},
  };
  return Topology(8, std::move(ls), std::move(groups));
}

Topology triangle(double capacity) { return make_topology(3, {{1, 2}, {2, 3}, {1, 3}}, capacity); }

Topology complete(int n, double capacity) {
  std::vector<std::pair<int, int>> e;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (a != b) e.emplace_back(a, b);
    }
  }
  return make_topology(n, e, capacity);
}

Topology random_strong(std::mt19937_64& rng, int n, int num_links, bool allow_parallel,
                       double cap_lo, double cap_hi) {
  std::uniform_real_distribution<double> cap(cap_lo, cap_hi);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::vector<Link> ls;
  std::set<std::pair<int, int>> used;
  for (int j = 0; j < n && static_cast<int>(ls.size()) < num_links; ++j) {
    ls.push_back({0, j, (j + 1) % n, cap(rng)});
    used.insert({j, (j + 1) % n});
  }
  int guard = 0;
  while (static_cast<int>(ls.size()) < num_links && guard++ < 10000) {
    const int s = vert(rng);
    const int t = vert(rng);
    if (s == t) continue;
    if (!allow_parallel && used.count({s, t})) continue;
    used.insert({s, t});
    ls.push_back({0, s, t, cap(rng)});
  }
  return Topology(n, std::move(ls)).with_singleton_groups();
}

DemandMatrix random_demand(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  DemandMatrix d(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) d(a, b) = u(rng);
    }
  }
  return d;
}

R3Instance make_instance(const Topology& t, double D, int F, bool wireless) {
  R3Instance inst;
  inst.vt = virtualize(t);
  DemandModel model;
  model.D = D;
  inst.demand = build_demand(t, model);
  inst.F = F;
  inst.wireless = wireless;
  return inst;
}

}  // namespace r3::testing
