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


// File formats. Every id in a file is 1-based; the library is 0-based.
//   topology JSON: {vertices: [names], links: [{src, tgt, capacity_gbps}],
//                   groups: [{vertex, members: [link ids], capacity_gbps, name?}]}
//   demand CSV:    header row of vertex names, then n rows of n values.
//   solution JSON: scalars, dense p and pi, sparse r as [a, b, link, value].
//   trace text:    one link id per line; '#' starts a comment.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "r3/demand.hpp"
#include "r3/reconfig.hpp"
#include "r3/topology.hpp"

namespace r3 {

struct R3Solution;

/// Malformed or missing input; the CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path, const std::string& what);
/// Writes via a temporary file and rename, so readers never see partial output.
void write_text_file(const std::string& path, const std::string& text);

/// Links not listed in any group become singleton groups.
Topology parse_topology_json(const std::string& text);
std::string topology_to_json(const Topology& t);

/// Columns follow the header order, which must be a permutation of the
/// topology's vertex names.
DemandMatrix parse_demand_csv(const std::string& text, const Topology& t);
std::string demand_to_csv(const DemandMatrix& d, const std::vector<std::string>& names);

std::string solution_to_json(const R3Solution& sol);
R3Solution parse_solution_json(const std::string& text);

/// Solution fields plus "failed" (1-based derived ids) and "drops".
std::string state_to_json(const ReconfigState& state, const R3Solution& original);

/// Original (file) link ids, 0-based on return. Throws InputError on
/// non-numeric lines, ids outside [1, num_links] or repeats.
std::vector<int> parse_trace(const std::string& text, int num_links);

std::string link_utilization_csv(const Topology& t, const LinkLoadReport& loads);

struct Bar {
  std::string label;
  double value = 0.0;
};

/// Static horizontal-reference bar chart; a dashed line marks `reference`.
std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars,
                          double reference = 1.0);

}  // namespace r3
