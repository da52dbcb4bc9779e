#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "xlg/knn.hpp"

namespace {

using namespace xlg;

TEST(Cosine, WorkedValues) {
  const std::vector<double> e1{1, 0}, e2{0, 1}, d{1, 1};
  EXPECT_EQ(cosine(e1, e1), 1.0);
  EXPECT_EQ(cosine(e1, e2), 0.0);
  EXPECT_NEAR(cosine(d, e1), 0.7071067811865475, 1e-15);
}

TEST(Cosine, ZeroNormIsError) {
  const std::vector<double> z{0, 0}, e1{1, 0};
  EXPECT_THROW(cosine(z, e1), NumericError);
}

TEST(KnnSearch, IdentityMatch) {
  RowMatrix t = RowMatrix::Identity(3, 3);
  RowMatrix q(1, 3);
  q << 1, 0, 0;
  const auto r = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].neighbors[0], (Neighbor{0, 1.0}));
}

TEST(KnnSearch, TieGoesToLowerIndex) {
  // Both targets sit at cosine 0.5 from the query.
  RowMatrix t(3, 3);
  t << 0, 0, 1, 1, 1, 0, 1, 0, 1;
  RowMatrix q(1, 3);
  q << 1, 0, 0;
  const auto r = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 1);
  EXPECT_EQ(r[0].neighbors[0].index, 1u);
  const auto r2 = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 2);
  EXPECT_EQ(r2[0].neighbors[1].index, 2u);
  EXPECT_EQ(r2[0].neighbors[0].cosine, r2[0].neighbors[1].cosine);
}

TEST(KnnSearch, KOutOfRange) {
  std::mt19937_64 rng(1);
  const EmbeddingMatrix q("q", testkit::gaussian(3, 4, rng)), t("t", testkit::gaussian(3, 4, rng));
  EXPECT_THROW(knn_search(q, t, 0), InputError);
  EXPECT_THROW(knn_search(q, t, 4), InputError);
}

TEST(KnnSearch, MatchesFullSortOracle) {
  std::mt19937_64 rng(50);
  const RowMatrix q = testkit::gaussian(50, 8, rng);
  const RowMatrix t = testkit::gaussian(50, 8, rng);
  const auto got = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 4);
  const auto want = testkit::knn_oracle(q, t, 4);
  for (std::size_t i = 0; i < got.size(); ++i) {
    ASSERT_EQ(got[i].neighbors.size(), 4u);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(got[i].neighbors[j].index, want[i].neighbors[j].index);
      EXPECT_NEAR(got[i].neighbors[j].cosine, want[i].neighbors[j].cosine, 1e-12);
    }
  }
}

TEST(KnnSearch, InvariantsOnRandomInputs) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng() % 120;
    const std::size_t d = 2 + rng() % 20;
    const std::size_t k = 1 + rng() % n;
    const auto r = knn_search(EmbeddingMatrix("q", testkit::gaussian(n / 2 + 1, d, rng)),
                              EmbeddingMatrix("t", testkit::gaussian(n, d, rng)), k);
    for (const auto& list : r) {
      std::set<std::size_t> seen;
      for (std::size_t j = 0; j < list.neighbors.size(); ++j) {
        EXPECT_TRUE(seen.insert(list.neighbors[j].index).second);
        EXPECT_LE(std::abs(list.neighbors[j].cosine), 1.0 + 1e-9);
        if (j > 0) EXPECT_GE(list.neighbors[j - 1].cosine, list.neighbors[j].cosine);
      }
    }
  }
}

TEST(KnnSearch, PositiveRowScalingLeavesListsUnchanged) {
  std::mt19937_64 rng(9);
  RowMatrix q = testkit::gaussian(30, 6, rng);
  RowMatrix t = testkit::gaussian(40, 6, rng);
  const auto base = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 5);
  std::uniform_real_distribution<double> scale(0.1, 50.0);
  for (Eigen::Index i = 0; i < q.rows(); ++i) q.row(i) *= scale(rng);
  for (Eigen::Index i = 0; i < t.rows(); ++i) t.row(i) *= scale(rng);
  const auto scaled = knn_search(EmbeddingMatrix("q", q), EmbeddingMatrix("t", t), 5);
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(base[i].neighbors[j].index, scaled[i].neighbors[j].index);
      EXPECT_NEAR(base[i].neighbors[j].cosine, scaled[i].neighbors[j].cosine, 1e-14);
    }
}

TEST(KnnSearch, DeterministicAcrossWorkerCounts) {
  std::mt19937_64 rng(10);
  const EmbeddingMatrix q("q", testkit::gaussian(150, 12, rng)), t("t", testkit::gaussian(300, 12, rng));
  const auto one = knn_search(q, t, 7, 1);
  for (std::size_t workers : {2u, 3u, 8u}) {
    const auto many = knn_search(q, t, 7, workers);
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].neighbors, many[i].neighbors);
  }
}

}  // namespace
