#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "xlg/error.hpp"
#include "xlg/stats/distributions.hpp"
#include "xlg/stats/regression.hpp"

namespace xlg::stats {

/// F test for one effect. When the error sum of squares is zero but the effect is not,
/// f_stat is +infinity, p_value 0 and eta_p2 1.
struct AnovaResult {
  double f_stat = 0.0;
  double p_value = 1.0;
  double eta_p2 = 0.0;
  double ss_effect = 0.0;
  double ss_error = 0.0;
  std::size_t df_effect = 0;
  std::size_t df_error = 0;

  bool infinite_f() const { return std::isinf(f_stat); }
};

namespace detail {

inline AnovaResult f_test(double ss_effect, double ss_error, std::size_t df_effect, std::size_t df_error) {
  AnovaResult r;
  r.ss_effect = std::max(ss_effect, 0.0);
  r.ss_error = std::max(ss_error, 0.0);
  r.df_effect = df_effect;
  r.df_error = df_error;
  if (df_error == 0) xlg::detail::fail_numeric("anova: no error degrees of freedom");
  if (r.ss_error == 0.0) {
    if (r.ss_effect == 0.0) xlg::detail::fail_numeric("anova: all observations identical");
    r.f_stat = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.eta_p2 = 1.0;
    return r;
  }
  r.f_stat = (r.ss_effect / static_cast<double>(df_effect)) / (r.ss_error / static_cast<double>(df_error));
  r.p_value = f_upper_tail(r.f_stat, static_cast<double>(df_effect), static_cast<double>(df_error));
  r.eta_p2 = r.ss_effect / (r.ss_effect + r.ss_error);
  return r;
}

inline double group_mean(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v;
  return s / static_cast<double>(g.size());
}

}  // namespace detail

inline AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) xlg::detail::fail_input("anova: need at least 2 groups");
  std::size_t n = 0;
  bool has_replicate = false;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) xlg::detail::fail_input("anova: empty group");
    has_replicate = has_replicate || g.size() >= 2;
    n += g.size();
    for (double v : g) grand += v;
  }
  if (!has_replicate) xlg::detail::fail_input("anova: need a group with at least 2 observations");
  grand /= static_cast<double>(n);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = detail::group_mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  return detail::f_test(ssb, ssw, groups.size() - 1, n - groups.size());
}

/// Splits `values` by label; groups come back in lexicographic label order.
inline std::map<std::string, std::vector<double>> group_by(const std::vector<double>& values,
                                                          const std::vector<std::string>& labels) {
  if (values.size() != labels.size()) xlg::detail::fail_input("group_by: length mismatch");
  std::map<std::string, std::vector<double>> out;
  for (std::size_t i = 0; i < values.size(); ++i) out[labels[i]].push_back(values[i]);
  return out;
}

/// One categorical factor adjusted for continuous covariates, Type-II sums of squares:
/// the effect is the drop in SSE from adding the factor's dummies (first level as
/// reference, levels in lexicographic order) to the covariates-only model.
inline AnovaResult ancova(const Eigen::VectorXd& y, const std::vector<std::string>& factor,
                          const Eigen::MatrixXd& covariates) {
  const auto n = static_cast<std::size_t>(y.size());
  if (factor.size() != n || static_cast<std::size_t>(covariates.rows()) != n)
    xlg::detail::fail_input("ancova: row count mismatch");
  std::map<std::string, std::size_t> levels;
  for (const auto& f : factor) levels.emplace(f, 0);
  if (levels.size() < 2) xlg::detail::fail_input("ancova: factor needs at least 2 levels");
  std::size_t idx = 0;
  for (auto& [name, i] : levels) i = idx++;
  const auto c = static_cast<Eigen::Index>(covariates.cols());
  const auto l = static_cast<Eigen::Index>(levels.size() - 1);

  Eigen::MatrixXd reduced(static_cast<Eigen::Index>(n), 1 + c);
  reduced.col(0).setOnes();
  reduced.rightCols(c) = covariates;
  Eigen::MatrixXd full(static_cast<Eigen::Index>(n), 1 + c + l);
  full.leftCols(1 + c) = reduced;
  full.rightCols(l).setZero();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t level = levels.at(factor[i]);
    if (level > 0) full(static_cast<Eigen::Index>(i), 1 + c + static_cast<Eigen::Index>(level) - 1) = 1.0;
  }
  auto sse = [&](const Eigen::MatrixXd& d) {
    const Eigen::VectorXd beta = detail::solve_least_squares(d, y);
    return (y - d * beta).squaredNorm();
  };
  const double sse_reduced = sse(reduced);
  const double sse_full = sse(full);
  const auto params = static_cast<std::size_t>(full.cols());
  if (n <= params) xlg::detail::fail_input("ancova: not enough observations for the model");
  return detail::f_test(sse_reduced - sse_full, sse_full, static_cast<std::size_t>(l), n - params);
}

struct TukeyComparison {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  double mean_diff = 0.0;  // mean(a) - mean(b)
  double q = 0.0;
  double p_value = 1.0;
};

/// All pairwise comparisons (Tukey-Kramer for unequal group sizes).
inline std::vector<TukeyComparison> tukey_hsd(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) xlg::detail::fail_input("tukey: need at least 2 groups");
  std::size_t n = 0;
  double ssw = 0.0;
  std::vector<double> means;
  for (const auto& g : groups) {
    if (g.empty()) xlg::detail::fail_input("tukey: empty group");
    const double m = detail::group_mean(g);
    means.push_back(m);
    for (double v : g) ssw += (v - m) * (v - m);
    n += g.size();
  }
  if (n <= groups.size()) xlg::detail::fail_input("tukey: no within-group degrees of freedom");
  const double df = static_cast<double>(n - groups.size());
  const double msw = ssw / df;
  if (!(msw > 0.0)) xlg::detail::fail_numeric("tukey: zero within-group variance");
  std::vector<TukeyComparison> out;
  const int k = static_cast<int>(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      TukeyComparison t;
      t.group_a = i;
      t.group_b = j;
      t.mean_diff = means[i] - means[j];
      const double se = std::sqrt(msw / 2.0 *
                                  (1.0 / static_cast<double>(groups[i].size()) + 1.0 / static_cast<double>(groups[j].size())));
      t.q = std::abs(t.mean_diff) / se;
      t.p_value = t.q == 0.0 ? 1.0 : studentized_range_p(t.q, k, df);
      out.push_back(t);
    }
  return out;
}

}  // namespace xlg::stats
