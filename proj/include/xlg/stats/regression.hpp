#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xlg/error.hpp"
#include "xlg/parallel.hpp"

namespace xlg::stats {

inline constexpr std::size_t kDefaultFolds = 10;
inline constexpr std::uint64_t kDefaultSeed = 17;

struct RegressionFit {
  Eigen::VectorXd coefficients;  // intercept first
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
};

inline double adjusted_r2(double r2, std::size_t n, std::size_t k) {
  if (n <= k + 1)
    xlg::detail::fail_input("adjusted_r2: need n > k + 1 (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  return 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - k - 1);
}

namespace detail {

inline constexpr double kRankThreshold = 1e-10;

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

// Least squares through column-pivoted Householder QR; rank deficiency is an error.
inline Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < design.cols())
    xlg::detail::fail_numeric("least squares: design is rank deficient (rank " + std::to_string(qr.rank()) +
                              " < " + std::to_string(design.cols()) + ")");
  return qr.solve(y);
}

// 1 - SSE/SST around the mean of `y`; a constant `y` scores 1 when predicted exactly, else 0.
inline double r2_score(const Eigen::VectorXd& y, const Eigen::VectorXd& pred) {
  const double mean = y.mean();
  const double sst = (y.array() - mean).square().sum();
  const double sse = (y - pred).squaredNorm();
  if (sst == 0.0) return sse == 0.0 ? 1.0 : 0.0;
  return 1.0 - sse / sst;
}

// Uniform integer in [0, bound) by rejection, so the stream does not depend on the
// standard library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

}  // namespace detail

/// Portable seeded Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[detail::uniform_below(rng, i)]);
  return perm;
}

inline RegressionFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(design.rows());
  const auto k = static_cast<std::size_t>(design.cols());
  if (static_cast<std::size_t>(y.size()) != n) xlg::detail::fail_input("ols_fit: row count mismatch");
  if (n <= k + 1) xlg::detail::fail_input("ols_fit: need n > k + 1");
  const Eigen::MatrixXd d = detail::with_intercept(design);
  RegressionFit fit;
  fit.coefficients = detail::solve_least_squares(d, y);
  fit.n = n;
  fit.k = k;
  // In-sample fit of a constant target explains nothing.
  fit.r2 = (y.array() == y(0)).all() ? 0.0 : detail::r2_score(y, d * fit.coefficients);
  fit.adj_r2 = adjusted_r2(fit.r2, n, k);
  return fit;
}

/// K-fold cross-validation over a fixed seeded shuffle. Fold membership is computed once,
/// so every column subset scored by the same instance sees identical splits.
class CrossValidator {
 public:
  CrossValidator(Eigen::MatrixXd features, Eigen::VectorXd y, std::size_t folds = kDefaultFolds,
                 std::uint64_t seed = kDefaultSeed)
      : y_(std::move(y)), n_(static_cast<std::size_t>(features.rows())) {
    if (static_cast<std::size_t>(y_.size()) != n_) xlg::detail::fail_input("cross-validation: row count mismatch");
    if (folds < 2) xlg::detail::fail_input("cross-validation: need at least 2 folds");
    if (n_ < 2 * folds)
      xlg::detail::fail_input("cross-validation: need n >= 2*folds (n=" + std::to_string(n_) + ")");
    const auto perm = seeded_permutation(n_, seed);
    const std::size_t base = n_ / folds;
    const std::size_t extra = n_ % folds;
    std::size_t start = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      const std::size_t size = base + (f < extra ? 1 : 0);
      Fold fold;
      fold.x_test.resize(static_cast<Eigen::Index>(size), features.cols());
      fold.y_test.resize(static_cast<Eigen::Index>(size));
      fold.x_train.resize(static_cast<Eigen::Index>(n_ - size), features.cols());
      fold.y_train.resize(static_cast<Eigen::Index>(n_ - size));
      Eigen::Index te = 0, tr = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        const auto row = static_cast<Eigen::Index>(perm[i]);
        if (i >= start && i < start + size) {
          fold.x_test.row(te) = features.row(row);
          fold.y_test(te++) = y_(row);
        } else {
          fold.x_train.row(tr) = features.row(row);
          fold.y_train(tr++) = y_(row);
        }
      }
      folds_.push_back(std::move(fold));
      start += size;
    }
    n_features_ = static_cast<std::size_t>(features.cols());
  }

  std::size_t n() const { return n_; }
  std::size_t n_features() const { return n_features_; }

  /// Mean held-out r2 of the model on the given feature columns.
  double mean_fold_r2(std::span<const std::size_t> cols) const {
    double total = 0.0;
    for (const auto& fold : folds_) {
      const Eigen::MatrixXd train = design(fold.x_train, cols);
      const Eigen::VectorXd beta = detail::solve_least_squares(train, fold.y_train);
      total += detail::r2_score(fold.y_test, design(fold.x_test, cols) * beta);
    }
    return total / static_cast<double>(folds_.size());
  }

  /// Mean held-out r2, adjusted once with the full sample size and the model's k.
  double adjusted_score(std::span<const std::size_t> cols) const {
    return adjusted_r2(mean_fold_r2(cols), n_, cols.size());
  }

 private:
  struct Fold {
    Eigen::MatrixXd x_train, x_test;
    Eigen::VectorXd y_train, y_test;
  };

  static Eigen::MatrixXd design(const Eigen::MatrixXd& x, std::span<const std::size_t> cols) {
    Eigen::MatrixXd d(x.rows(), static_cast<Eigen::Index>(cols.size()) + 1);
    d.col(0).setOnes();
    for (std::size_t j = 0; j < cols.size(); ++j) d.col(static_cast<Eigen::Index>(j) + 1) = x.col(static_cast<Eigen::Index>(cols[j]));
    return d;
  }

  Eigen::VectorXd y_;
  std::size_t n_ = 0;
  std::size_t n_features_ = 0;
  std::vector<Fold> folds_;
};

inline double cv_adjusted_r2(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                             std::size_t folds = kDefaultFolds, std::uint64_t seed = kDefaultSeed) {
  std::vector<std::size_t> all(static_cast<std::size_t>(features.cols()));
  std::iota(all.begin(), all.end(), 0);
  return CrossValidator(features, y, folds, seed).adjusted_score(all);
}

inline std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; mask != 0; ++j, mask >>= 1)
    if (mask & 1u) out.push_back(j);
  return out;
}

struct FeatureSearchResult {
  std::vector<std::size_t> best;  // ascending feature indices
  double best_adj_r2 = -std::numeric_limits<double>::infinity();
  std::size_t models_evaluated = 0;
  std::size_t rank_deficient = 0;  // subsets whose design could not be fitted
};

/// Cross-validated adjusted r2 for every nonempty feature subset (2^p - 1 models).
/// Ties go to the smaller subset, then to the lexicographically smaller index list.
inline FeatureSearchResult exhaustive_feature_search(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                                     std::size_t folds = kDefaultFolds,
                                                     std::uint64_t seed = kDefaultSeed, std::size_t workers = 0) {
  const auto p = static_cast<std::size_t>(features.cols());
  if (p == 0 || p > 20) xlg::detail::fail_input("exhaustive_feature_search: need 1..20 features");
  const CrossValidator cv(features, y, folds, seed);
  const std::uint32_t n_models = (1u << p) - 1;
  std::vector<double> scores(n_models, -std::numeric_limits<double>::infinity());
  std::vector<char> failed(n_models, 0);
  parallel_for(
      n_models,
      [&](std::size_t i) {
        const auto cols = mask_to_indices(static_cast<std::uint32_t>(i + 1));
        try {
          scores[i] = cv.adjusted_score(cols);
        } catch (const NumericError&) {
          failed[i] = 1;
        }
      },
      workers);

  FeatureSearchResult out;
  out.models_evaluated = n_models;
  std::vector<std::size_t> best_cols;
  for (std::uint32_t i = 0; i < n_models; ++i) {
    if (failed[i]) {
      ++out.rank_deficient;
      continue;
    }
    auto cols = mask_to_indices(i + 1);
    const double s = scores[i];
    const bool better = best_cols.empty() || s > out.best_adj_r2 ||
                        (s == out.best_adj_r2 &&
                         (cols.size() < best_cols.size() || (cols.size() == best_cols.size() && cols < best_cols)));
    if (better) {
      out.best_adj_r2 = s;
      best_cols = std::move(cols);
    }
  }
  if (best_cols.empty()) xlg::detail::fail_numeric("exhaustive_feature_search: no subset could be fitted");
  out.best = std::move(best_cols);
  return out;
}

struct AblationEntry {
  std::size_t feature = 0;
  double delta = 0.0;  // baseline adj r2 minus adj r2 without this feature
  std::size_t rank = 0;  // 1 = largest delta
};

struct AblationResult {
  double baseline_adj_r2 = 0.0;
  std::vector<AblationEntry> entries;  // in feature order
};

/// Single-step ablation from the full model. Equal deltas rank by lower feature index.
inline AblationResult ablation_single_step(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                           std::size_t folds = kDefaultFolds, std::uint64_t seed = kDefaultSeed,
                                           std::size_t workers = 0) {
  const auto p = static_cast<std::size_t>(features.cols());
  if (p < 2) xlg::detail::fail_input("ablation needs at least 2 features");
  const CrossValidator cv(features, y, folds, seed);
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), 0);
  AblationResult out;
  out.baseline_adj_r2 = cv.adjusted_score(all);
  out.entries.resize(p);
  parallel_for(
      p,
      [&](std::size_t f) {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < p; ++j)
          if (j != f) cols.push_back(j);
        out.entries[f] = AblationEntry{f, out.baseline_adj_r2 - cv.adjusted_score(cols), 0};
      },
      workers);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out.entries[a].delta > out.entries[b].delta; });
  for (std::size_t r = 0; r < p; ++r) out.entries[order[r]].rank = r + 1;
  return out;
}

/// Mean rank of each feature across several ablation runs (one per dependent variable).
inline std::vector<double> average_ranks(std::span<const AblationResult> runs) {
  if (runs.empty()) return {};
  std::vector<double> mean(runs.front().entries.size(), 0.0);
  for (const auto& run : runs) {
    if (run.entries.size() != mean.size()) xlg::detail::fail_input("average_ranks: feature count mismatch");
    for (const auto& e : run.entries) mean[e.feature] += static_cast<double>(e.rank);
  }
  for (auto& m : mean) m /= static_cast<double>(runs.size());
  return mean;
}

/// How many best subsets each feature appears in.
inline std::vector<std::size_t> tally_best_features(std::span<const FeatureSearchResult> results,
                                                    std::size_t n_features) {
  std::vector<std::size_t> counts(n_features, 0);
  for (const auto& r : results)
    for (std::size_t f : r.best) {
      if (f >= n_features) xlg::detail::fail_input("tally_best_features: feature index out of range");
      ++counts[f];
    }
  return counts;
}

}  // namespace xlg::stats
