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

#include <Eigen/Dense>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "r3/constraints.hpp"

namespace r3 {
namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) {
  const auto d = m.to_dense();
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out(i, j) = d[static_cast<std::size_t>(i) * m.cols() + j];
  }
  return out;
}

// Columns of the routing tensor belonging to pair (a, b).
std::vector<int> pair_columns(const RoutingIndexer& ix, int a, int b) {
  std::vector<int> cols;
  for (int l = 0; l < ix.num_links; ++l) cols.push_back(ix.index(a, b, l));
  return cols;
}

TEST(RoutingIndexer, IsABijection) {
  const RoutingIndexer ix{4, 5};
  std::set<int> seen;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int l = 0; l < 5; ++l) {
        const int k = ix.index(a, b, l);
        EXPECT_TRUE(seen.insert(k).second);
        const auto t = ix.triple(k);
        EXPECT_EQ(t.a, a);
        EXPECT_EQ(t.b, b);
        EXPECT_EQ(t.l, l);
      }
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), ix.size());
  EXPECT_EQ(*seen.rbegin(), ix.size() - 1);
}

TEST(RoutingSystem, ThreeNodeForcedValues) {
  const Topology t = testing::three_node();
  const RoutingSystem rs = build_routing_system(t);
  ASSERT_TRUE(rs.conflicts.empty());
  const Eigen::MatrixXd R = dense(rs.R);
  const Eigen::VectorXd rho = Eigen::Map<const Eigen::VectorXd>(rs.rho.data(), rs.rho.size());
  // Pairs (2,3) and (3,1), 0-based (1,2) and (2,0), with forced link 2 and 3.
  const std::vector<std::tuple<int, int, int>> forced = {{1, 2, 1}, {2, 0, 2}};
  for (auto [a, b, l] : forced) {
    const auto cols = pair_columns(rs.indexer, a, b);
    Eigen::MatrixXd block(R.rows(), static_cast<int>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) block.col(static_cast<int>(k)) = R.col(cols[k]);
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(block).rank(), static_cast<int>(cols.size()));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(R.cols());
    x(rs.indexer.index(a, b, l)) = 1.0;
    // Rows that touch this pair are satisfied exactly by the forced vector.
    for (int i = 0; i < R.rows(); ++i) {
      bool touches = false;
      for (int c : cols) touches = touches || R(i, c) != 0.0;
      if (touches) EXPECT_EQ(R.row(i).dot(x), rho(i)) << "row " << i;
    }
  }
}

TEST(RoutingSystem, PrintedGuardConflictsOnThreeNode) {
  RoutingOptions opt;
  opt.guard = InTotalityGuard::kDestinationNotTarget;
  const RoutingSystem rs = build_routing_system(testing::three_node(), opt);
  EXPECT_FALSE(rs.conflicts.empty());
}

TEST(RoutingSystem, SingleLinkForcesUnitFlow) {
  const Topology t = testing::make_topology(2, {{1, 2}});
  const RoutingSystem rs = build_routing_system(t);
  const Eigen::MatrixXd R = dense(rs.R);
  const Eigen::VectorXd rho = Eigen::Map<const Eigen::VectorXd>(rs.rho.data(), rs.rho.size());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  ASSERT_EQ(lu.rank(), R.cols());
  const Eigen::VectorXd x = lu.solve(rho);
  for (int k = 0; k < rs.indexer.size(); ++k) {
    EXPECT_NEAR(x(k), k == rs.indexer.index(0, 1, 0) ? 1.0 : 0.0, 1e-12);
  }
}

TEST(RoutingSystem, OutTotalityAtVertexWithoutOutLinksIsAConflict) {
  // Vertex 3 has an in-link only; pair (3,1) needs out-flow from 3.
  RoutingOptions opt;
  opt.mode = ConstraintMode::kRelaxed;
  const Topology t = testing::make_topology(3, {{1, 2}, {2, 3}});
  // Vertex 3 is a graph target, so out-totality is not emitted; no conflict.
  EXPECT_TRUE(build_routing_system(t, opt).conflicts.empty());
  // In-totality at 1 (a graph source) is exempt under the default guard, but
  // the printed guard keeps it and the row has no in-links.
  opt.mode = ConstraintMode::kFull;
  opt.guard = InTotalityGuard::kDestinationNotTarget;
  const RoutingSystem rs = build_routing_system(t, opt);
  bool found = false;
  for (const auto& c : rs.conflicts) found = found || c.label.kind == RowKind::kInTotality;
  EXPECT_TRUE(found);
}

TEST(RoutingSystem, SixNodeRowBound) {
  const Topology t = testing::six_node_wireless();
  const RoutingSystem rs = build_routing_system(t);
  EXPECT_LE(rs.num_rows(), 436);
  EXPECT_TRUE(rs.conflicts.empty());
}

TEST(RoutingSystem, RelaxedModeOmitsTwoFamilies) {
  RoutingOptions opt;
  opt.mode = ConstraintMode::kRelaxed;
  const RoutingSystem rs = build_routing_system(testing::six_node_wireless(), opt);
  for (const auto& lb : rs.row_labels) {
    EXPECT_NE(lb.kind, RowKind::kInTotality);
    EXPECT_NE(lb.kind, RowKind::kNoExtension);
  }
  EXPECT_LT(rs.num_rows(), build_routing_system(testing::six_node_wireless()).num_rows());
}

class RoutingSystemProperty : public ::testing::TestWithParam<int> {};

TEST_P(RoutingSystemProperty, StructureAndPruning) {
  std::mt19937_64 rng(GetParam());
  const int n = 3 + GetParam() % 3;
  const Topology t = testing::random_strong(rng, n, n + 3, false);
  const RoutingSystem rs = build_routing_system(t);
  const RoutingSystem raw = build_routing_system_unpruned(t);
  const int bound = n * t.num_links() + n * (n - 1) * (n - 2) + 2 * n * (n - 1) +
                    2 * (n - 1) * t.num_links();
  EXPECT_LE(rs.num_rows(), bound);

  std::set<std::vector<std::pair<int, double>>> rows;
  for (int i = 0; i < rs.num_rows(); ++i) {
    auto cols = rs.R.row_cols(i);
    auto vals = rs.R.row_values(i);
    ASSERT_FALSE(cols.empty());
    const double sign = vals[0] > 0 ? 1.0 : -1.0;
    std::vector<std::pair<int, double>> key;
    const auto first = rs.indexer.triple(cols[0]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      EXPECT_TRUE(vals[k] == 1.0 || vals[k] == -1.0);
      const auto tr = rs.indexer.triple(cols[k]);
      EXPECT_EQ(tr.a, first.a);
      EXPECT_EQ(tr.b, first.b);
      key.emplace_back(cols[k], sign * vals[k]);
    }
    EXPECT_TRUE(rows.insert(key).second) << "duplicate row " << i;
  }

  // Pruning keeps the solution set: equal ranks and a consistent stack.
  const Eigen::MatrixXd A = dense(rs.R);
  const Eigen::MatrixXd B = dense(raw.R);
  Eigen::MatrixXd stacked(A.rows() + B.rows(), A.cols());
  stacked << A, B;
  const int ra = Eigen::FullPivLU<Eigen::MatrixXd>(A).rank();
  EXPECT_EQ(ra, Eigen::FullPivLU<Eigen::MatrixXd>(B).rank());
  EXPECT_EQ(ra, Eigen::FullPivLU<Eigen::MatrixXd>(stacked).rank());
}

TEST_P(RoutingSystemProperty, ShortestPathRoutingSatisfiesPathRows) {
  std::mt19937_64 rng(100 + GetParam());
  const int n = 3 + GetParam() % 4;
  const Topology t = testing::random_strong(rng, n, n + 4, false);
  const auto r = testing::shortest_path_routing(t);
  for (const auto& v : check_routing(t, r)) {
    ADD_FAILURE() << to_string(v.label.kind) << " (" << v.label.a + 1 << "," << v.label.b + 1
                  << ") residual " << v.residual;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RoutingSystemProperty, ::testing::Range(1, 13));

TEST(RoutingSystem, ShortestPathOnDagSatisfiesAllButUnreachableTotality) {
  // DAG: 1->2, 1->3, 2->4, 3->4.
  const Topology t = testing::make_topology(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  const auto r = testing::shortest_path_routing(t);
  const auto reach = t.reachability();
  for (const auto& v : check_routing(t, r)) {
    const bool excused = (v.label.kind == RowKind::kOutTotality ||
                          v.label.kind == RowKind::kInTotality) &&
                         !reach[v.label.a * 4 + v.label.b];
    EXPECT_TRUE(excused) << to_string(v.label.kind) << " (" << v.label.a + 1 << ","
                         << v.label.b + 1 << ")";
  }
}

TEST(CheckRouting, AllZeroTensorViolatesOutTotality) {
  const Topology t = testing::three_node();
  const std::vector<double> r(static_cast<std::size_t>(9 * 3), 0.0);
  const auto v = check_routing(t, r);
  bool pair12 = false;
  for (const auto& x : v) {
    EXPECT_NE(x.label.kind, RowKind::kSelfPair);
    EXPECT_NE(x.label.kind, RowKind::kConservation);
    pair12 = pair12 || (x.label.kind == RowKind::kOutTotality && x.label.a == 0 && x.label.b == 1);
  }
  EXPECT_TRUE(pair12);
}

TEST(CheckRouting, DimensionMismatchThrows) {
  EXPECT_THROW(check_routing(testing::three_node(), std::vector<double>(5, 0.0)),
               std::invalid_argument);
}

TEST(ProtectionSystem, ThreeNodeBlockForLinkOne) {
  const Topology t = testing::three_node();
  const RoutingSystem rs = build_routing_system(t);
  const ProtectionSystem ps = build_protection_system(rs, t);
  EXPECT_EQ(ps.P.cols(), 9);
  // The first block reuses R's columns of pair (1,2).
  for (int i = 0; i < rs.num_rows(); ++i) {
    for (int lp = 0; lp < 3; ++lp) {
      EXPECT_EQ(ps.P.at(i, lp), rs.R.at(i, rs.indexer.index(0, 1, lp)));
    }
    if (ps.sigma_mask[i] == 0.0) EXPECT_EQ(ps.rhs[i], 0.0);
  }
  // p_12(1) + p_12(2) = 1 and p_12(3) = p_12(2) pin the family p = (1 - s, s, s).
  const Eigen::MatrixXd P = dense(ps.P);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(ps.rhs.data(), ps.rhs.size());
  for (double s : {0.0, 0.25, 1.0}) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(9);
    x(0) = 1.0 - s;
    x(1) = s;
    x(2) = s;
    x(3 + 1) = 1.0;  // link 2 (1->3) uses itself
    x(6 + 2) = 1.0;  // link 3 (3->2) uses itself
    EXPECT_LT((P * x - rhs).cwiseAbs().maxCoeff(), 1e-12) << s;
  }
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(9);
  bad(0) = 0.5;
  bad(1) = 0.5;
  bad(4) = 1.0;
  bad(8) = 1.0;
  EXPECT_GT((P * bad - rhs).cwiseAbs().maxCoeff(), 0.1);
}

TEST(ProtectionSystem, SingleLinkForcesSelfProtection) {
  const Topology t = testing::make_topology(2, {{1, 2}});
  const RoutingSystem rs = build_routing_system(t);
  const ProtectionSystem ps = build_protection_system(rs, t);
  const Eigen::MatrixXd P = dense(ps.P);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(ps.rhs.data(), ps.rhs.size());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
  ASSERT_EQ(lu.rank(), 1);
  EXPECT_NEAR(lu.solve(rhs)(0), 1.0, 1e-15);
}

TEST(ProtectionSystem, OneBlockPerDerivedLink) {
  const VirtualizedTopology vt = virtualize(testing::parallel_star());
  const RoutingSystem rs = build_routing_system(vt.derived);
  const ProtectionSystem ps = build_protection_system(rs, vt.derived);
  EXPECT_EQ(ps.P.cols(), 16 * 16);
  EXPECT_EQ(ps.column_labels.size(), 256u);
}

TEST(ProtectionSystem, RejectsParallelLinks) {
  const Topology t = testing::parallel_star();
  EXPECT_THROW(build_protection_system(build_routing_system(t), t), std::invalid_argument);
}

TEST(RoutingSystem, CsvDumpHasOneLinePerEntry) {
  const RoutingSystem rs = build_routing_system(testing::three_node());
  const std::string csv = routing_system_csv(rs);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(lines), rs.R.nonzeros() + 1);
}

}  // namespace
}  // namespace r3
