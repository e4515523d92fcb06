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


#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "r3/io.hpp"
#include "r3/r3core.hpp"

namespace r3 {
namespace {

TEST(TopologyJson, RoundTrip) {
  const Topology t = testing::six_node_wireless();
  const Topology back = parse_topology_json(topology_to_json(t));
  ASSERT_EQ(back.num_vertices(), 6);
  ASSERT_EQ(back.num_links(), 16);
  for (int l = 0; l < 16; ++l) {
    EXPECT_EQ(back.link(l).src, t.link(l).src);
    EXPECT_EQ(back.link(l).tgt, t.link(l).tgt);
    EXPECT_EQ(back.link(l).capacity, t.link(l).capacity);
    EXPECT_EQ(back.groups()[back.group_of(l)].members, t.groups()[t.group_of(l)].members);
  }
}

TEST(TopologyJson, AcceptsNamesAndIndices) {
  const Topology t = parse_topology_json(R"({"vertices": ["x", "y"],
      "links": [{"src": "x", "tgt": 2, "capacity_gbps": 4}, {"src": 2, "tgt": "x", "capacity_gbps": 1}]})");
  EXPECT_EQ(t.link(0).src, 0);
  EXPECT_EQ(t.link(0).tgt, 1);
  EXPECT_EQ(t.link(0).capacity, 4.0);
  EXPECT_EQ(t.groups().size(), 2u);
}

TEST(TopologyJson, RejectsMalformedInput) {
  EXPECT_THROW(parse_topology_json("{"), InputError);
  EXPECT_THROW(parse_topology_json(R"({"vertices": 2})"), InputError);
  EXPECT_THROW(parse_topology_json(R"({"vertices": 2, "links": [{"src": 1, "tgt": 3, "capacity_gbps": 1}]})"),
               InputError);
  EXPECT_THROW(parse_topology_json(R"({"vertices": ["a", "a"], "links": []})"), InputError);
  EXPECT_THROW(parse_topology_json(R"({"vertices": 2, "links": [{"src": 1, "tgt": 2}]})"), InputError);
  EXPECT_THROW(parse_topology_json(R"({"vertices": 2, "links": [{"src": 1, "tgt": 1, "capacity_gbps": 1}]})"),
               InputError);
}

TEST(DemandCsv, HeaderPermutesColumns) {
  const Topology t = parse_topology_json(R"({"vertices": ["x", "y"],
      "links": [{"src": 1, "tgt": 2, "capacity_gbps": 1}, {"src": 2, "tgt": 1, "capacity_gbps": 1}]})");
  const DemandMatrix d = parse_demand_csv("y,x\n0,0.5\n0.25,0\n", t);
  EXPECT_EQ(d(1, 0), 0.5);
  EXPECT_EQ(d(0, 1), 0.25);
  const DemandMatrix back = parse_demand_csv(demand_to_csv(d, t.vertex_names()), t);
  EXPECT_EQ(back.values, d.values);
  EXPECT_THROW(parse_demand_csv("x,y\n0,1\n", t), InputError);
  EXPECT_THROW(parse_demand_csv("x,z\n0,1\n1,0\n", t), InputError);
  EXPECT_THROW(parse_demand_csv("x,y\n0,abc\n1,0\n", t), InputError);
  EXPECT_THROW(parse_demand_csv("x,y\n1,1\n1,0\n", t), InputError);
}

TEST(SolutionJson, RoundTripIsExact) {
  const R3Instance inst = testing::make_instance(testing::complete(3), 0.1, 1);
  const R3Solution s = solve_r3(inst);
  const R3Solution back = parse_solution_json(solution_to_json(s));
  EXPECT_EQ(back.n, s.n);
  EXPECT_EQ(back.F, s.F);
  EXPECT_EQ(back.mu, s.mu);
  EXPECT_EQ(back.effective_mu, s.effective_mu);
  EXPECT_EQ(back.r, s.r);
  EXPECT_EQ(back.p, s.p);
  EXPECT_EQ(back.pi, s.pi);
  EXPECT_EQ(back.lam, s.lam);
  EXPECT_EQ(back.ignored_links, s.ignored_links);
  EXPECT_THROW(parse_solution_json("[]"), InputError);
}

TEST(Trace, ParsesCommentsAndRejectsRepeats) {
  EXPECT_EQ(parse_trace("# failures\n3\n\n1  # second\n", 4), (std::vector<int>{2, 0}));
  EXPECT_TRUE(parse_trace("", 4).empty());
  EXPECT_THROW(parse_trace("1\n1\n", 4), InputError);
  EXPECT_THROW(parse_trace("5\n", 4), InputError);
  EXPECT_THROW(parse_trace("0\n", 4), InputError);
  EXPECT_THROW(parse_trace("x\n", 4), InputError);
}

TEST(Files, AtomicWriteAndMissingRead) {
  const auto dir = std::filesystem::temp_directory_path() / "r3_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_text_file(path, "hello\n");
  EXPECT_EQ(read_text_file(path, "output"), "hello\n");
  try {
    read_text_file((dir / "missing.json").string(), "topology");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("topology not found: ", 0), 0u);
  }
  std::filesystem::remove_all(dir);
}

TEST(BarChart, IsWellFormedSvg) {
  const std::string svg = bar_chart_svg("t", {{"a", 0.5}, {"b", 1.5}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

}  // namespace
}  // namespace r3
