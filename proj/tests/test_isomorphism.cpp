#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "support.hpp"
#include "xlg/isomorphism.hpp"

namespace {

using namespace xlg;

// Square roots of the eigenvalues of M^T M, descending.
std::vector<double> gram_oracle(const RowMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m.transpose() * m));
  std::vector<double> out;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) out.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  out.resize(static_cast<std::size_t>(std::min(m.rows(), m.cols())));
  return out;
}

TEST(SingularValues, IdentityAndDiagonal) {
  EXPECT_EQ(singular_values(RowMatrix(RowMatrix::Identity(3, 3))).values, (std::vector<double>{1, 1, 1}));
  RowMatrix d = RowMatrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 3;
  d(2, 2) = 2;
  const auto s = singular_values(d).values;
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 3, 1e-15);
  EXPECT_NEAR(s[1], 2, 1e-15);
  EXPECT_NEAR(s[2], 1, 1e-15);
}

TEST(SingularValues, MatchesGramEigenOracle) {
  std::mt19937_64 rng(20);
  const RowMatrix m = testkit::gaussian(20, 8, rng);
  const auto got = singular_values(m).values;
  const auto want = gram_oracle(m);
  ASSERT_EQ(got.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(got[i], want[i], 1e-8);
}

TEST(Svg, WorkedExamples) {
  std::mt19937_64 rng(21);
  const RowMatrix x = testkit::gaussian(10, 3, rng);
  const EmbeddingMatrix a("a", x), b("b", 2.0 * x);
  EXPECT_EQ(svg(a, a), 0.0);
  EXPECT_NEAR(svg(a, b), 3 * std::log(2.0) * std::log(2.0), 1e-12);
}

TEST(Svg, Symmetric) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10; ++t) {
    const EmbeddingMatrix a("a", testkit::gaussian(15, 6, rng)), b("b", testkit::gaussian(12, 6, rng, 3.0));
    EXPECT_EQ(svg(a, b), svg(b, a));
  }
}

TEST(Svg, ScalingLaw) {
  std::mt19937_64 rng(23);
  const RowMatrix x = testkit::gaussian(25, 7, rng);
  for (double c : {0.5, 2.0, 10.0, 0.013}) {
    const double l = std::log(c);
    EXPECT_NEAR(svg(EmbeddingMatrix("a", x), EmbeddingMatrix("b", c * x)), 7 * l * l, 1e-8);
  }
}

TEST(Svg, TruncatesToShorterSpectrum) {
  SingularSpectrum a{{4, 2, 1}}, b{{4, 2, 1, 0.5, 0.25}};
  EXPECT_EQ(svg(a, b), 0.0);
  SingularSpectrum zeros{{0, 0}};
  EXPECT_THROW(svg(a, zeros), NumericError);
}

TEST(EffectiveRank, WorkedExamples) {
  EXPECT_EQ(effective_rank({{1, 1, 1, 1}}), 4u);
  EXPECT_EQ(effective_rank({{1, 0, 0}}), 1u);
  EXPECT_NEAR(spectral_entropy({{2, 1}}), 0.6365142, 1e-7);
  EXPECT_EQ(effective_rank({{2, 1}}), 1u);
  EXPECT_THROW(effective_rank({{0, 0}}), NumericError);
}

TEST(EffectiveRank, UniformSpectraOfAnyLength) {
  for (std::size_t n = 1; n <= 300; ++n) EXPECT_EQ(effective_rank({std::vector<double>(n, 0.7)}), n) << n;
}

// Recomputes the whole entropy -> effective rank -> condition number chain from scratch.
double econd_chain_oracle(std::vector<double> s) {
  double total = 0;
  for (double v : s) total += v;
  double h = 0;
  for (double v : s) h -= (v / total) * std::log(v / total);
  const auto r = static_cast<std::size_t>(std::floor(std::exp(h) + 1e-9));
  return s[0] / s[r - 1];
}

TEST(EffectiveConditionNumber, WorkedExamples) {
  EXPECT_EQ(effective_condition_number({{1, 1, 1}}), 1.0);
  EXPECT_EQ(effective_condition_number({{2, 1}}), 1.0);
  // H = 1.75 ln 2, exp(H) = 3.36 -> rank 3 -> 4 / 1.
  EXPECT_EQ(effective_rank({{4, 2, 1, 1}}), 3u);
  EXPECT_EQ(effective_condition_number({{4, 2, 1, 1}}), 4.0);
  EXPECT_EQ(effective_condition_number({{4, 2, 1, 1}}), econd_chain_oracle({4, 2, 1, 1}));
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s(2 + rng() % 10);
    for (auto& v : s) v = u(rng);
    std::sort(s.begin(), s.end(), std::greater<>());
    EXPECT_EQ(effective_condition_number({s}), econd_chain_oracle(s));
  }
}

TEST(EffectiveConditionNumber, ScaleInvariant) {
  std::mt19937_64 rng(25);
  const RowMatrix x = testkit::gaussian(40, 10, rng);
  const double base = effective_condition_number(singular_values(x));
  for (double c : {0.25, 3.0, 1000.0})
    EXPECT_NEAR(effective_condition_number(singular_values(RowMatrix(c * x))), base, 1e-9 * base);
}

TEST(EcondHm, WorkedExamples) {
  EXPECT_EQ(econd_hm(SingularSpectrum{{1, 1, 1}}, SingularSpectrum{{2, 2}}), 1.0);
  EXPECT_EQ(harmonic_mean(2, 2), 2.0);
  EXPECT_EQ(harmonic_mean(1, 3), 1.5);
  std::mt19937_64 rng(26);
  const EmbeddingMatrix a("a", testkit::gaussian(30, 8, rng)), b("b", testkit::gaussian(30, 8, rng));
  EXPECT_EQ(econd_hm(a, b), econd_hm(b, a));
  EXPECT_GE(econd_hm(a, b), 1.0);
}

}  // namespace
