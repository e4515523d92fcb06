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

#include <algorithm>
#include <memory>

#include "fixtures.hpp"
#include "r3/analysis.hpp"
#include "r3/constraints.hpp"
#include "r3/r3core.hpp"
#include "r3/reconfig.hpp"

namespace r3 {
namespace {

std::vector<double> identity_protection(int N) {
  std::vector<double> p(static_cast<std::size_t>(N) * N, 0.0);
  for (int l = 0; l < N; ++l) p[static_cast<std::size_t>(l) * N + l] = 1.0;
  return p;
}

DemandMatrix single_pair(int n, int a, int b, double v) {
  DemandMatrix d(n);
  d(a, b) = v;
  return d;
}

TEST(Xi, NormalizesAwayTheFailedLink) {
  // Link 0 protected half by itself, half over links 1 and 2.
  std::vector<double> p = identity_protection(3);
  p[0] = 0.5;
  p[1] = 0.5;
  p[2] = 0.5;
  const XiResult x = xi(p, 3, 0);
  EXPECT_FALSE(x.unprotected);
  EXPECT_EQ(x.xi, (std::vector<double>{0.0, 1.0, 1.0}));
  EXPECT_TRUE(xi(p, 3, 1).unprotected);
  EXPECT_EQ(xi(p, 3, 1).xi, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_THROW(xi(p, 2, 0), std::invalid_argument);
  EXPECT_THROW(xi(p, 3, 3), std::out_of_range);
}

TEST(ApplyFailure, TriangleDetour) {
  // Links 1->2, 2->3, 1->3; r_13 uses the direct link, protected via 1->2->3.
  auto t = std::make_shared<const Topology>(testing::triangle());
  auto d = std::make_shared<const DemandMatrix>(single_pair(3, 0, 2, 0.4));
  const RoutingIndexer ix{3, 3};
  std::vector<double> r(static_cast<std::size_t>(ix.size()), 0.0);
  r[ix.index(0, 2, 2)] = 1.0;
  r[ix.index(0, 1, 0)] = 1.0;
  r[ix.index(1, 2, 1)] = 1.0;
  std::vector<double> p = identity_protection(3);
  p[2 * 3 + 2] = 0.0;
  p[2 * 3 + 0] = 1.0;
  p[2 * 3 + 1] = 1.0;
  const ReconfigState s0 = ReconfigState::make(t, d, r, p);
  EXPECT_EQ(s0.initially_unprotected, (std::vector<char>{1, 1, 0}));
  const ReconfigState s1 = apply_failure(s0, 2);
  EXPECT_EQ(s1.r[ix.index(0, 2, 0)], 1.0);
  EXPECT_EQ(s1.r[ix.index(0, 2, 1)], 1.0);
  EXPECT_EQ(s1.r[ix.index(0, 2, 2)], 0.0);
  EXPECT_TRUE(s1.drops.empty());
  EXPECT_EQ(s1.failed, std::vector<int>{2});
  const LinkLoadReport rep = link_loads(s1);
  EXPECT_DOUBLE_EQ(rep.load[0], 0.4);
  EXPECT_EQ(rep.load[2], 0.0);
  EXPECT_THROW(apply_failure(s1, 2), std::invalid_argument);
  EXPECT_THROW(apply_failure(s1, 7), std::invalid_argument);
}

TEST(ApplyFailure, UnprotectedLinkDropsWithReason) {
  auto t = std::make_shared<const Topology>(testing::make_topology(2, {{1, 2}, {2, 1}}));
  auto d = std::make_shared<const DemandMatrix>(single_pair(2, 0, 1, 1.0));
  const RoutingIndexer ix{2, 2};
  std::vector<double> r(static_cast<std::size_t>(ix.size()), 0.0);
  r[ix.index(0, 1, 0)] = 1.0;
  r[ix.index(1, 0, 1)] = 1.0;
  const ReconfigState s = apply_failure(ReconfigState::make(t, d, r, identity_protection(2)), 0);
  ASSERT_EQ(s.drops.size(), 1u);
  EXPECT_EQ(s.drops[0].reason, DropReason::kUnreachable);
  EXPECT_EQ(s.drops[0].a, 0);
  EXPECT_EQ(s.drops[0].b, 1);
  EXPECT_DOUBLE_EQ(s.drops[0].amount, 1.0);
  EXPECT_EQ(s.r[ix.index(0, 1, 0)], 0.0);
}

TEST(ApplyFailure, RegressionCycleAfterDetour) {
  // Links 1->2, 1->3, 2->1, 2->4, 3->4. r_14 = 1->2->4; link 2->4 is
  // protected by 2->1->3->4, so its failure sends r_14 back through vertex 1.
  auto t = std::make_shared<const Topology>(
      testing::make_topology(4, {{1, 2}, {1, 3}, {2, 1}, {2, 4}, {3, 4}}));
  auto d = std::make_shared<const DemandMatrix>(single_pair(4, 0, 3, 1.0));
  const RoutingIndexer ix{4, 5};
  std::vector<double> r(static_cast<std::size_t>(ix.size()), 0.0);
  r[ix.index(0, 3, 0)] = 1.0;
  r[ix.index(0, 3, 3)] = 1.0;
  std::vector<double> p = identity_protection(5);
  p[3 * 5 + 3] = 0.0;
  p[3 * 5 + 2] = 1.0;
  p[3 * 5 + 1] = 1.0;
  p[3 * 5 + 4] = 1.0;
  const ReconfigState s = apply_failure(ReconfigState::make(t, d, r, p), 3);
  EXPECT_TRUE(s.drops.empty());
  const std::vector<double> want = {1.0, 1.0, 1.0, 0.0, 1.0};
  for (int l = 0; l < 5; ++l) EXPECT_EQ(s.r[ix.index(0, 3, l)], want[l]);

  // The reconfigured flow returns to its origin, which the no-return rows forbid.
  std::vector<double> only(s.r.size(), 0.0);
  for (int l = 0; l < 5; ++l) only[ix.index(0, 3, l)] = s.r[ix.index(0, 3, l)];
  bool no_return = false;
  for (const auto& v : check_routing(*t, only)) {
    no_return = no_return || (v.label.kind == RowKind::kNoReturn && v.label.a == 0 && v.label.b == 3);
  }
  EXPECT_TRUE(no_return);

  const CycleReport cyc = detect_cycles(s.r, 0, 3, *t);
  ASSERT_EQ(cyc.cycles.size(), 1u);
  auto links = cyc.cycles[0].links;
  std::sort(links.begin(), links.end());
  EXPECT_EQ(links, (std::vector<int>{0, 2}));

  const std::vector<double> clean = remove_cycles(s.r, *t);
  const std::vector<double> direct = {0.0, 1.0, 0.0, 0.0, 1.0};
  for (int l = 0; l < 5; ++l) EXPECT_EQ(clean[ix.index(0, 3, l)], direct[l]);
}

TEST(ApplyFailure, EarlierFailureCanStrandProtection) {
  // Links A 1->2, B 1->3, C 3->2, E 2->3, G 1->4, H 4->2. A and B protect each
  // other: p_A = A/2 + (B, C)/2 and p_B = B/2 + (A, E)/2. Failing B folds
  // xi_B = (A, E) into p_A, leaving A self-only plus the loop E, C.
  auto t = std::make_shared<const Topology>(
      testing::make_topology(4, {{1, 2}, {1, 3}, {3, 2}, {2, 3}, {1, 4}, {4, 2}}));
  auto d = std::make_shared<const DemandMatrix>(single_pair(4, 0, 1, 1.0));
  const int N = 6;
  const RoutingIndexer ix{4, N};
  std::vector<double> r(static_cast<std::size_t>(ix.size()), 0.0);
  r[ix.index(0, 1, 0)] = 1.0;
  std::vector<double> p = identity_protection(N);
  p[0 * N + 0] = 0.5;
  p[0 * N + 1] = 0.5;
  p[0 * N + 2] = 0.5;
  p[1 * N + 1] = 0.5;
  p[1 * N + 0] = 0.5;
  p[1 * N + 3] = 0.5;
  const ReconfigState s0 = ReconfigState::make(t, d, r, p);
  const ReconfigState s1 = apply_failure(s0, 1);
  EXPECT_TRUE(s1.drops.empty());
  EXPECT_EQ(s1.p[0 * N + 0], 1.0);
  EXPECT_EQ(s1.p[0 * N + 2], 0.5);
  EXPECT_EQ(s1.p[0 * N + 3], 0.5);

  const ReconfigState s2 = apply_failure(s1, 0);
  ASSERT_EQ(s2.drops.size(), 1u);
  EXPECT_EQ(s2.drops[0].reason, DropReason::kUnprotected);
  EXPECT_EQ(s2.drops[0].protection_of, -1);
  EXPECT_DOUBLE_EQ(s2.drops[0].amount, 1.0);
  EXPECT_FALSE(s0.initially_unprotected[0]);
  // A detour 1->4->2 survives, but nothing in p_A pointed at it.
  for (int l = 0; l < N; ++l) EXPECT_EQ(s2.r[ix.index(0, 1, l)], 0.0);
}

class OrderInvariance : public ::testing::TestWithParam<int> {};

TEST_P(OrderInvariance, DropFreeOrderingsAgree) {
  const R3Instance inst = testing::make_instance(testing::complete(4), 0.05, 2);
  const R3Solution sol = solve_r3(inst);
  auto t = std::make_shared<const Topology>(inst.vt.derived);
  auto d = std::make_shared<const DemandMatrix>(derived_demand(inst.vt, inst.demand));
  const ReconfigState s0 = ReconfigState::from_solution(sol, t, d);
  const int N = t->num_links();
  const int a = GetParam() % N;
  const int b = (GetParam() * 5 + 1) % N;
  if (a == b) GTEST_SKIP();
  const ReconfigState ab = apply_failures(s0, {a, b});
  const ReconfigState ba = apply_failures(s0, {b, a});
  ASSERT_TRUE(ab.drops.empty() && ba.drops.empty());
  for (std::size_t k = 0; k < ab.r.size(); ++k) EXPECT_NEAR(ab.r[k], ba.r[k], 1e-9);
  for (std::size_t k = 0; k < ab.p.size(); ++k) EXPECT_NEAR(ab.p[k], ba.p[k], 1e-9);
  // Reconfigured routing stays a valid routing, possibly with cycles.
  EXPECT_LE(link_loads(ab).max_utilization, sol.mu + 1e-7);
}

INSTANTIATE_TEST_SUITE_P(Pairs, OrderInvariance, ::testing::Range(0, 12));

TEST(ReconfigState, RejectsMismatchedSizes) {
  auto t = std::make_shared<const Topology>(testing::triangle());
  auto d = std::make_shared<const DemandMatrix>(DemandMatrix(3));
  EXPECT_THROW(ReconfigState::make(t, d, {}, identity_protection(3)), std::invalid_argument);
  EXPECT_THROW(ReconfigState::make(t, std::make_shared<const DemandMatrix>(DemandMatrix(2)),
                                   std::vector<double>(27), identity_protection(3)),
               std::invalid_argument);
}

}  // namespace
}  // namespace r3
