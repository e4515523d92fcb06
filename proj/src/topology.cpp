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

#include "r3/topology.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <map>
#include <numeric>
#include <stdexcept>

namespace r3 {

Topology::Topology(int num_vertices, std::vector<Link> links,
                   std::vector<P2MPGroup> groups,
                   std::vector<std::string> vertex_names)
    : n_(num_vertices),
      links_(std::move(links)),
      groups_(std::move(groups)),
      names_(std::move(vertex_names)) {
  if (n_ < 0) throw std::invalid_argument("Topology: negative vertex count");
  if (names_.empty()) {
    for (int j = 0; j < n_; ++j) names_.push_back(std::to_string(j + 1));
  }
  if (static_cast<int>(names_.size()) != n_) {
    throw std::invalid_argument("Topology: vertex name count differs from vertex count");
  }
  out_.resize(static_cast<std::size_t>(n_));
  in_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < num_links(); ++i) {
    Link& l = links_[i];
    l.id = i;
    if (l.src >= 0 && l.src < n_ && l.tgt >= 0 && l.tgt < n_) {
      out_[l.src].push_back(i);
      in_[l.tgt].push_back(i);
    }
  }
  link_group_.assign(links_.size(), -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (int m : groups_[g].members) {
      if (m >= 0 && m < num_links() && link_group_[m] < 0) {
        link_group_[m] = static_cast<int>(g);
      }
    }
  }
}

const std::vector<int>& Topology::out_links(int j) const {
  if (j < 0 || j >= n_) throw std::out_of_range(fmt::format("vertex {} out of range", j));
  return out_[j];
}

const std::vector<int>& Topology::in_links(int j) const {
  if (j < 0 || j >= n_) throw std::out_of_range(fmt::format("vertex {} out of range", j));
  return in_[j];
}

std::vector<int> Topology::graph_sources() const {
  std::vector<int> s;
  for (int j = 0; j < n_; ++j) {
    if (in_[j].empty()) s.push_back(j);
  }
  return s;
}

std::vector<int> Topology::graph_targets() const {
  std::vector<int> s;
  for (int j = 0; j < n_; ++j) {
    if (out_[j].empty()) s.push_back(j);
  }
  return s;
}

bool Topology::has_parallel_links() const {
  for (int j = 0; j < n_; ++j) {
    std::vector<int> tgts;
    for (int l : out_[j]) tgts.push_back(links_[l].tgt);
    std::sort(tgts.begin(), tgts.end());
    if (std::adjacent_find(tgts.begin(), tgts.end()) != tgts.end()) return true;
  }
  return false;
}

Topology Topology::with_singleton_groups() const {
  std::vector<P2MPGroup> groups = groups_;
  std::vector<int> per_vertex(static_cast<std::size_t>(n_), 0);
  for (const auto& g : groups) {
    if (g.vertex >= 0 && g.vertex < n_) ++per_vertex[g.vertex];
  }
  for (const Link& l : links_) {
    if (link_group_[l.id] >= 0 || l.src < 0 || l.src >= n_) continue;
    groups.push_back(P2MPGroup{l.src, per_vertex[l.src]++, {l.id}, l.capacity, {}});
  }
  return Topology(n_, links_, std::move(groups), names_);
}

Topology Topology::without_links(const std::vector<int>& removed,
                                 std::vector<int>* kept) const {
  std::vector<char> gone(links_.size(), 0);
  for (int l : removed) gone.at(static_cast<std::size_t>(l)) = 1;
  std::vector<int> new_id(links_.size(), -1);
  std::vector<Link> links;
  std::vector<int> old_of;
  for (const Link& l : links_) {
    if (gone[l.id]) continue;
    new_id[l.id] = static_cast<int>(links.size());
    old_of.push_back(l.id);
    links.push_back(l);
  }
  std::vector<P2MPGroup> groups;
  std::vector<int> per_vertex(static_cast<std::size_t>(n_), 0);
  for (const auto& g : groups_) {
    P2MPGroup ng{g.vertex, 0, {}, g.capacity, g.name};
    for (int m : g.members) {
      if (m >= 0 && m < num_links() && new_id[m] >= 0) ng.members.push_back(new_id[m]);
    }
    if (ng.members.empty()) continue;
    if (g.vertex >= 0 && g.vertex < n_) ng.group_id = per_vertex[g.vertex]++;
    groups.push_back(std::move(ng));
  }
  if (kept != nullptr) *kept = old_of;
  return Topology(n_, std::move(links), std::move(groups), names_);
}

std::vector<char> Topology::reachability() const {
  std::vector<char> reach(static_cast<std::size_t>(n_) * n_, 0);
  std::vector<int> stack;
  for (int a = 0; a < n_; ++a) {
    char* row = reach.data() + static_cast<std::size_t>(a) * n_;
    row[a] = 1;
    stack.assign(1, a);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int l : out_[v]) {
        const int w = links_[l].tgt;
        if (!row[w]) {
          row[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return reach;
}

std::vector<std::string> validate_topology(const Topology& t) {
  std::vector<std::string> issues;
  const int n = t.num_vertices();
  for (const Link& l : t.links()) {
    if (l.src < 0 || l.src >= n || l.tgt < 0 || l.tgt >= n) {
      issues.push_back(fmt::format("dangling vertex: link {} references ({}, {})",
                                   l.id + 1, l.src + 1, l.tgt + 1));
      continue;
    }
    if (l.src == l.tgt) {
      issues.push_back(fmt::format("self-loop: link {} at vertex {}", l.id + 1, l.src + 1));
    }
    if (!(l.capacity >= 0.0)) {
      issues.push_back(fmt::format("negative capacity: link {} has {}", l.id + 1, l.capacity));
    }
  }
  std::vector<int> seen(static_cast<std::size_t>(t.num_links()), 0);
  for (std::size_t g = 0; g < t.groups().size(); ++g) {
    const P2MPGroup& grp = t.groups()[g];
    if (grp.vertex < 0 || grp.vertex >= n) {
      issues.push_back(fmt::format("group vertex: group {} references vertex {}", g + 1,
                                   grp.vertex + 1));
    }
    if (grp.members.empty()) {
      issues.push_back(fmt::format("empty group: group {} at vertex {}", g + 1, grp.vertex + 1));
    }
    if (!(grp.capacity >= 0.0)) {
      issues.push_back(fmt::format("negative capacity: group {} has {}", g + 1, grp.capacity));
    }
    for (int m : grp.members) {
      if (m < 0 || m >= t.num_links()) {
        issues.push_back(fmt::format("dangling vertex: group {} lists unknown link {}", g + 1, m + 1));
        continue;
      }
      if (t.link(m).src != grp.vertex) {
        issues.push_back(fmt::format("foreign member: link {} in group {} does not leave vertex {}",
                                     m + 1, g + 1, grp.vertex + 1));
      }
      if (++seen[m] == 2) {
        issues.push_back(fmt::format("duplicate membership: link {} is in more than one group", m + 1));
      }
    }
  }
  for (const Link& l : t.links()) {
    if (seen[l.id] == 0) {
      issues.push_back(fmt::format("uncovered link: link {} belongs to no group", l.id + 1));
    }
  }
  return issues;
}

VirtualizedTopology virtualize(const Topology& t) {
  const int n = t.num_vertices();
  const int num = t.num_links();
  std::map<std::pair<int, int>, int> multiplicity;
  for (const Link& l : t.links()) ++multiplicity[{l.src, l.tgt}];

  struct Pending {
    Link link;
    int origin;
    bool receiver;
  };
  std::vector<Pending> pending;
  std::vector<int> virtual_vertices;
  std::vector<std::string> names = t.vertex_names();
  for (const Link& l : t.links()) {
    if (multiplicity[{l.src, l.tgt}] == 1) {
      pending.push_back({l, l.id, false});
      continue;
    }
    const int v = n + static_cast<int>(virtual_vertices.size());
    virtual_vertices.push_back(l.id);
    names.push_back(fmt::format("{}~{}", names[l.src], l.id + 1));
    pending.push_back({Link{0, l.src, v, l.capacity}, l.id, false});
    pending.push_back({Link{0, v, l.tgt, l.capacity}, l.id, true});
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& x, const Pending& y) {
    return std::pair(x.link.src, x.link.tgt) < std::pair(y.link.src, y.link.tgt);
  });

  VirtualizedTopology vt;
  vt.sigma.assign(static_cast<std::size_t>(num), -1);
  vt.half_map.resize(static_cast<std::size_t>(num));
  vt.origin.resize(pending.size());
  std::vector<Link> links;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const Pending& p = pending[k];
    links.push_back(p.link);
    vt.origin[k] = p.origin;
    if (p.receiver) {
      vt.half_map[p.origin].second = static_cast<int>(k);
    } else {
      vt.sigma[p.origin] = static_cast<int>(k);
      vt.half_map[p.origin].first = static_cast<int>(k);
    }
  }
  // Every link with a real source sorts before the receiver halves, so the
  // transmitter halves occupy exactly the ids [0, N).
  vt.sigma_inv.assign(static_cast<std::size_t>(num), -1);
  for (int l = 0; l < num; ++l) {
    if (vt.sigma[l] >= num) throw std::logic_error("virtualize: sigma is not a permutation");
    vt.sigma_inv[vt.sigma[l]] = l;
  }

  std::vector<P2MPGroup> groups;
  const int total_n = n + static_cast<int>(virtual_vertices.size());
  for (const auto& g : t.groups()) {
    P2MPGroup ng = g;
    for (int& m : ng.members) m = vt.sigma.at(static_cast<std::size_t>(m));
    groups.push_back(std::move(ng));
  }
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (!pending[k].receiver) continue;
    groups.push_back(P2MPGroup{pending[k].link.src, 0, {static_cast<int>(k)},
                               pending[k].link.capacity, {}});
  }
  vt.base = t;
  vt.derived = Topology(total_n, std::move(links), std::move(groups), std::move(names));
  vt.virtual_vertices = std::move(virtual_vertices);
  return vt;
}

}  // namespace r3
