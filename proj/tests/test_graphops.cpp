#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hsan/dataio.hpp"
#include "hsan/graphops.hpp"

using namespace hsan;

namespace {

Dataset graph(int n, std::vector<Edge> edges) {
  Dataset d;
  d.name = "g";
  d.attributes = Dense::Ones(n, 1);
  d.edges = std::move(edges);
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) d.labels[i] = i % 2;
  d.num_classes = 2;
  return d;
}

Dataset random_graph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < p) edges.emplace_back(i, j);
    }
  }
  return graph(n, edges);
}

Dense random_dense(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Dense m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace

TEST(BuildAdjacency, SmallCases) {
  const SparseSym empty = build_adjacency(graph(2, {}));
  EXPECT_TRUE(empty.to_dense().isZero());
  const Dense one = build_adjacency(graph(2, {{0, 1}})).to_dense();
  EXPECT_EQ(one(0, 1), 1.0);
  EXPECT_EQ(one(1, 0), 1.0);
  EXPECT_EQ(one(0, 0), 0.0);
  EXPECT_EQ(one(1, 1), 0.0);
}

TEST(BuildAdjacency, NonzeroCountIsTwicePerEdge) {
  std::mt19937_64 rng(3);
  const Dataset d = random_graph(40, 0.2, rng);
  EXPECT_EQ(build_adjacency(d).nonzeros(), 2 * d.edges.size());
}

TEST(FilterMatrix, NoEdgesIsIdentity) {
  const Dense f = filter_matrix(build_adjacency(graph(2, {}))).to_dense();
  EXPECT_TRUE(f.isIdentity(0.0));
}

TEST(FilterMatrix, SingleEdgeAllHalves) {
  const Dense f = filter_matrix(build_adjacency(graph(2, {{0, 1}}))).to_dense();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(f(i, j), 0.5);
  }
}

TEST(FilterMatrix, ThreeNodePath) {
  const SparseSym f = filter_matrix(build_adjacency(graph(3, {{0, 1}, {1, 2}})));
  EXPECT_DOUBLE_EQ(f.at(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(f.at(1, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.at(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(f.at(0, 1), 1.0 / std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(f.at(2, 1), 1.0 / std::sqrt(6.0));
  EXPECT_EQ(f.at(0, 2), 0.0);
}

TEST(FilterMatrix, DiagonalIsInverseSelfLoopDegree) {
  std::mt19937_64 rng(11);
  const Dataset d = random_graph(30, 0.15, rng);
  const SparseSym adj = build_adjacency(d);
  const Dense a = adj.to_dense();
  const Dense f = filter_matrix(adj).to_dense();
  EXPECT_TRUE(f == f.transpose());
  for (int i = 0; i < 30; ++i) EXPECT_DOUBLE_EQ(f(i, i), 1.0 / (a.row(i).sum() + 1.0));
}

TEST(FilterMatrix, SpectrumWithinUnitInterval) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Dense f = filter_matrix(build_adjacency(random_graph(25, 0.1 + 0.1 * trial, rng))).to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1.0 - 1e-12);
  }
}

TEST(SmoothAttributes, ZeroStepsAndIdentityFilter) {
  std::mt19937_64 rng(2);
  const Dense x = random_dense(4, 3, rng);
  const SparseSym filt = filter_matrix(build_adjacency(graph(4, {{0, 1}, {2, 3}})));
  EXPECT_TRUE(smooth_attributes(x, filt, 0).matrix == x);
  const SparseSym ident = filter_matrix(build_adjacency(graph(4, {})));
  EXPECT_TRUE(smooth_attributes(x, ident, 5).matrix == x);
  EXPECT_THROW(smooth_attributes(x, filt, -1), std::invalid_argument);
}

TEST(SmoothAttributes, SingleEdgeHandComputed) {
  Dense x(2, 2);
  x << 2, 0, 0, 2;
  const auto r = smooth_attributes(x, filter_matrix(build_adjacency(graph(2, {{0, 1}}))), 1);
  EXPECT_EQ(r.filter_steps, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(r.matrix(i, j), 1.0);
  }
}

TEST(SmoothAttributes, MatchesDenseProduct) {
  std::mt19937_64 rng(8);
  const Dataset d = random_graph(20, 0.2, rng);
  const SparseSym filt = filter_matrix(build_adjacency(d));
  const Dense x = random_dense(20, 5, rng);
  const Dense f = filt.to_dense();
  Dense expect = x;
  for (int s = 0; s < 3; ++s) expect = (f * expect).eval();
  EXPECT_LT((smooth_attributes(x, filt, 3).matrix - expect).norm(), 1e-12 * expect.norm());
}

TEST(SmoothAttributes, NeverAmplifiesFrobeniusNorm) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = random_graph(30, 0.05 + 0.05 * trial, rng);
    const SparseSym filt = filter_matrix(build_adjacency(d));
    const Dense x = random_dense(30, 4, rng);
    for (int t : {1, 2, 6}) {
      EXPECT_LE(smooth_attributes(x, filt, t).matrix.norm(), x.norm() * (1.0 + 1e-9));
    }
  }
}

TEST(SmoothAttributes, StepsCompose) {
  std::mt19937_64 rng(29);
  const Dataset d = random_graph(25, 0.2, rng);
  const SparseSym filt = filter_matrix(build_adjacency(d));
  const Dense x = random_dense(25, 3, rng);
  const Dense two_then_three = smooth_attributes(smooth_attributes(x, filt, 2).matrix, filt, 3).matrix;
  const Dense five = smooth_attributes(x, filt, 5).matrix;
  EXPECT_LE((two_then_three - five).norm(), 1e-12 * five.norm());
}
