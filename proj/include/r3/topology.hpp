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

// Capacitated directed multigraphs with point-to-multipoint (P2MP) transmitter
// groups. All indices are 0-based in the library; file formats and the CLI
// use 1-based ids and convert at the boundary.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace r3 {

struct Link {
  int id = 0;
  int src = 0;
  int tgt = 0;
  double capacity = 0.0;  // Gbps
};

/// Links at `vertex` that share one transmitter and its capacity.
struct P2MPGroup {
  int vertex = 0;
  int group_id = 0;  // index among the groups of `vertex`
  std::vector<int> members;
  double capacity = 0.0;
  std::string name;  // optional display label
};

/// Immutable after construction. Link ids are positions in links().
class Topology {
 public:
  Topology() = default;
  /// Link ids are reassigned to their positions. Links whose endpoints are out
  /// of range are kept (validate_topology reports them) but not indexed in
  /// the adjacency lists.
  Topology(int num_vertices, std::vector<Link> links,
           std::vector<P2MPGroup> groups = {},
           std::vector<std::string> vertex_names = {});

  int num_vertices() const { return n_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(int id) const { return links_.at(static_cast<std::size_t>(id)); }
  const std::vector<P2MPGroup>& groups() const { return groups_; }
  const std::vector<std::string>& vertex_names() const { return names_; }

  /// Throws std::out_of_range for j outside [0, n).
  const std::vector<int>& out_links(int j) const;
  const std::vector<int>& in_links(int j) const;

  /// Vertices with zero in-degree.
  std::vector<int> graph_sources() const;
  /// Vertices with zero out-degree.
  std::vector<int> graph_targets() const;
  bool is_graph_source(int j) const { return in_links(j).empty(); }
  bool is_graph_target(int j) const { return out_links(j).empty(); }

  /// Index into groups() of the group containing the link, or -1.
  int group_of(int link) const { return link_group_.at(static_cast<std::size_t>(link)); }

  bool has_parallel_links() const;

  /// Copy in which every link not covered by a group gets a singleton group
  /// with capacity equal to the link capacity.
  Topology with_singleton_groups() const;

  /// Copy without the given links; surviving links are renumbered in order.
  /// `kept` receives, for each new id, the old id.
  Topology without_links(const std::vector<int>& removed,
                         std::vector<int>* kept = nullptr) const;

  /// reachable[a * n + b] is true iff a directed path a -> b exists (a -> a
  /// counts as reachable).
  std::vector<char> reachability() const;

 private:
  int n_ = 0;
  std::vector<Link> links_;
  std::vector<P2MPGroup> groups_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<int> link_group_;
};

/// Empty result means valid. Messages start with a stable tag: "self-loop",
/// "dangling vertex", "negative capacity", "uncovered link", "duplicate
/// membership", "foreign member", "empty group", "group vertex".
std::vector<std::string> validate_topology(const Topology& t);

struct LinkHalves {
  int first = 0;                // transmitter-side half (or the copied link)
  std::optional<int> second;    // receiver-side half for split links
};

/// Parallel-link-free copy of a topology plus the link permutation relating
/// the two orderings.
struct VirtualizedTopology {
  Topology base;
  Topology derived;
  std::vector<int> sigma;             // original link -> transmitter half
  std::vector<int> sigma_inv;         // derived link in [0, N) -> original link
  std::vector<int> virtual_vertices;  // (v - base n) -> split original link
  std::vector<LinkHalves> half_map;   // original link -> derived halves
  std::vector<int> origin;            // derived link -> original link
};

/// Splits every member of every parallel family through a fresh virtual
/// vertex. Derived links are sorted by (src, tgt); virtual vertices are
/// appended after the real ones in order of the split link id. Transmitter
/// halves keep their group, receiver halves get singleton groups.
VirtualizedTopology virtualize(const Topology& t);

}  // namespace r3
