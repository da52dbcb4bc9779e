#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "xlg/persistence.hpp"

namespace {

using namespace xlg;

PersistenceDiagram diagram(std::initializer_list<double> deaths) {
  PersistenceDiagram d;
  for (double v : deaths) d.points.push_back({0.0, v});
  return d;
}

PersistenceDiagram random_diagram(std::mt19937_64& rng, std::size_t max_points) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  PersistenceDiagram d;
  const std::size_t n = rng() % (max_points + 1);
  for (std::size_t i = 0; i < n; ++i) d.points.push_back({0.0, u(rng)});
  return d;
}

TEST(PersistenceDiagram, SmallCases) {
  RowMatrix one(1, 3);
  one << 1, 2, 3;
  EXPECT_TRUE(persistence_diagram_0d(EmbeddingMatrix("a", one)).points.empty());
  RowMatrix two(2, 3);
  two << 1, 2, 3, 1, 2, 3;
  const auto d = persistence_diagram_0d(EmbeddingMatrix("a", two));
  ASSERT_EQ(d.points.size(), 1u);
  EXPECT_EQ(d.points[0].birth, 0.0);
  EXPECT_EQ(d.points[0].death, 0.0);
}

TEST(PersistenceDiagram, CollinearMergeHeights) {
  RowMatrix p(3, 2);
  p << 0, 0, 1, 0, 3, 0;
  EXPECT_EQ(mst_merge_heights(p), (std::vector<double>{1.0, 2.0}));
}

TEST(PersistenceDiagram, MatchesKruskalOracle) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 20; ++t) {
    const RowMatrix p = testkit::gaussian(5 + rng() % 60, 2 + rng() % 6, rng);
    auto want = testkit::mst_oracle(p);
    std::sort(want.begin(), want.end());
    const auto got = mst_merge_heights(p);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(PersistenceDiagram, UsesUnitRowsAndPrefix) {
  std::mt19937_64 rng(31);
  RowMatrix p = testkit::gaussian(30, 4, rng);
  const auto full = persistence_diagram_0d(EmbeddingMatrix("a", p));
  EXPECT_EQ(full.points.size(), 29u);
  for (const auto& pt : full.points) EXPECT_LE(pt.death, 2.0);
  RowMatrix scaled = p;
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= 1.0 + static_cast<double>(i);
  const auto d2 = persistence_diagram_0d(EmbeddingMatrix("a", scaled));
  for (std::size_t i = 0; i < full.points.size(); ++i) EXPECT_NEAR(full.points[i].death, d2.points[i].death, 1e-12);
  const auto pre = persistence_diagram_0d(EmbeddingMatrix("a", p), 10);
  const auto head = persistence_diagram_0d(EmbeddingMatrix("a", RowMatrix(p.topRows(10))));
  EXPECT_EQ(pre.points.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(pre.points[i].death, head.points[i].death);
}

TEST(Bottleneck, WorkedExamples) {
  EXPECT_EQ(bottleneck_distance(diagram({1}), diagram({1})), 0.0);
  EXPECT_EQ(bottleneck_distance(diagram({2}), diagram({})), 1.0);
  EXPECT_EQ(bottleneck_distance(diagram({1, 3}), diagram({2})), 1.0);
  EXPECT_EQ(bottleneck_distance(diagram({}), diagram({})), 0.0);
}

TEST(Bottleneck, MatchesBruteForce) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 300; ++t) {
    const auto a = random_diagram(rng, 3);
    const auto b = random_diagram(rng, 3);
    EXPECT_NEAR(bottleneck_distance(a, b), testkit::bottleneck_oracle(a.points, b.points), 1e-12);
  }
}

TEST(Bottleneck, SymmetricAndTriangle) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_diagram(rng, 5), b = random_diagram(rng, 5), c = random_diagram(rng, 5);
    const double ab = bottleneck_distance(a, b), bc = bottleneck_distance(b, c), ac = bottleneck_distance(a, c);
    EXPECT_EQ(ab, bottleneck_distance(b, a));
    EXPECT_LE(ac, ab + bc + 1e-9);
  }
}

TEST(GhDistance, IdentityRotationPermutation) {
  std::mt19937_64 rng(34);
  const RowMatrix x = testkit::gaussian(60, 8, rng);
  const EmbeddingMatrix a("a", x);
  EXPECT_EQ(gh_distance(a, a), 0.0);
  const Eigen::MatrixXd q = testkit::random_orthogonal(8, rng);
  EXPECT_LE(gh_distance(a, EmbeddingMatrix("b", RowMatrix(x * q))), 1e-9);
  std::vector<Eigen::Index> perm(60);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  RowMatrix px(60, 8);
  for (Eigen::Index i = 0; i < 60; ++i) px.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  EXPECT_LE(gh_distance(a, EmbeddingMatrix("p", px)), 1e-12);
}

TEST(GhDistance, SymmetricAndMatchesOracle) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 20; ++t) {
    const EmbeddingMatrix a("a", testkit::gaussian(1 + rng() % 4, 3, rng));
    const EmbeddingMatrix b("b", testkit::gaussian(1 + rng() % 4, 3, rng));
    EXPECT_EQ(gh_distance(a, b), gh_distance(b, a));
    EXPECT_NEAR(gh_distance(a, b),
                testkit::bottleneck_oracle(persistence_diagram_0d(a).points, persistence_diagram_0d(b).points),
                1e-12);
  }
}

}  // namespace
