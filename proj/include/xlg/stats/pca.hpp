#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <vector>

#include "xlg/error.hpp"
#include "xlg/stats/regression.hpp"

namespace xlg::stats {

struct PcaResult {
  Eigen::MatrixXd components;           // k x k, column j = j-th principal direction
  Eigen::VectorXd explained_variance;   // per component, sample variance of the scores
  Eigen::VectorXd explained_ratio;      // explained_variance / total
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;             // ones unless standardized
  Eigen::MatrixXd scores;               // centred (scaled) data times components
};

/// Centres the columns, optionally scales them to unit sample standard deviation.
inline Eigen::MatrixXd prepare_columns(const Eigen::MatrixXd& x, bool standardize, Eigen::RowVectorXd* mean_out = nullptr,
                                       Eigen::RowVectorXd* scale_out = nullptr) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd c = x.rowwise() - mean;
  Eigen::RowVectorXd scale = Eigen::RowVectorXd::Ones(x.cols());
  if (standardize) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double sd = std::sqrt(c.col(j).squaredNorm() / static_cast<double>(x.rows() - 1));
      if (!(sd > 0.0)) xlg::detail::fail_numeric("pca: column " + std::to_string(j) + " has zero variance");
      scale(j) = sd;
      c.col(j) /= sd;
    }
  }
  if (mean_out) *mean_out = mean;
  if (scale_out) *scale_out = scale;
  return c;
}

/// Principal directions are the right singular vectors of the centred matrix, each signed
/// so that its largest-magnitude loading is positive.
inline PcaResult pca(const Eigen::MatrixXd& x, bool standardize) {
  if (x.rows() < 2) xlg::detail::fail_input("pca: need at least 2 rows");
  PcaResult r;
  const Eigen::MatrixXd c = prepare_columns(x, standardize, &r.mean, &r.scale);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  r.components = svd.matrixV();
  const auto& s = svd.singularValues();
  const Eigen::Index k = x.cols();
  r.explained_variance = Eigen::VectorXd::Zero(k);
  for (Eigen::Index j = 0; j < s.size(); ++j)
    r.explained_variance(j) = s(j) * s(j) / static_cast<double>(x.rows() - 1);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index arg = 0;
    r.components.col(j).cwiseAbs().maxCoeff(&arg);
    if (r.components(arg, j) < 0.0) r.components.col(j) *= -1.0;
  }
  const double total = r.explained_variance.sum();
  r.explained_ratio = total > 0.0 ? Eigen::VectorXd(r.explained_variance / total) : Eigen::VectorXd::Zero(k);
  r.scores = c * r.components;
  return r;
}

struct PcrResult {
  std::vector<double> cv_adj_r2;  // index j-1 -> first j components
  std::vector<double> train_r2;   // in-sample r2 with the first j components
  std::size_t best_components = 0;
};

/// Principal component regression on standardized features for j = 1..m components,
/// scored by cross-validated adjusted r2. Ties go to fewer components.
inline PcrResult pcr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t m,
                     std::size_t folds = kDefaultFolds, std::uint64_t seed = kDefaultSeed) {
  if (m < 1 || m > static_cast<std::size_t>(x.cols())) xlg::detail::fail_input("pcr: m must lie in [1, k]");
  const PcaResult p = pca(x, true);
  const CrossValidator cv(p.scores, y, folds, seed);
  PcrResult out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= m; ++j) {
    std::vector<std::size_t> cols(j);
    std::iota(cols.begin(), cols.end(), 0);
    const double score = cv.adjusted_score(cols);
    out.cv_adj_r2.push_back(score);
    out.train_r2.push_back(ols_fit(p.scores.leftCols(static_cast<Eigen::Index>(j)), y).r2);
    if (score > best) {
      best = score;
      out.best_components = j;
    }
  }
  return out;
}

}  // namespace xlg::stats
