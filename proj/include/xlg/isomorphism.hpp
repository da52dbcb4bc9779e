#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "xlg/embedding.hpp"
#include "xlg/error.hpp"

namespace xlg {

/// Singular values in non-increasing order.
struct SingularSpectrum {
  std::vector<double> values;
};

inline constexpr double kSpectrumRelTol = 1e-12;

inline SingularSpectrum singular_values(const RowMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) detail::fail_input("singular_values: empty matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  if (svd.info() != Eigen::Success) detail::fail_numeric("singular_values: SVD did not converge");
  const auto& s = svd.singularValues();
  SingularSpectrum out{{s.data(), s.data() + s.size()}};
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  for (auto& v : out.values) v = std::max(v, 0.0);
  return out;
}

inline SingularSpectrum singular_values(const EmbeddingMatrix& m) { return singular_values(m.data()); }

/// Values at or above kSpectrumRelTol * sigma_1, still descending.
inline std::vector<double> significant_values(const SingularSpectrum& s) {
  std::vector<double> out;
  if (s.values.empty() || !(s.values.front() > 0.0)) return out;
  const double cut = kSpectrumRelTol * s.values.front();
  for (double v : s.values)
    if (v >= cut && v > 0.0) out.push_back(v);
  return out;
}

/// Sum of squared log-differences of the paired spectra. Both spectra are filtered to their
/// significant values and truncated to the shorter length.
inline double svg(const SingularSpectrum& sa, const SingularSpectrum& sb) {
  const auto a = significant_values(sa);
  const auto b = significant_values(sb);
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) detail::fail_numeric("svg: no singular values above tolerance");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < 1e-12 || b[i] < 1e-12) detail::fail_numeric("svg: singular value below 1e-12");
    const double d = std::log(a[i]) - std::log(b[i]);
    total += d * d;
  }
  return total;
}

inline double svg(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return svg(singular_values(a), singular_values(b));
}

/// Natural-log entropy of the spectrum normalized to unit sum (0 log 0 = 0).
inline double spectral_entropy(const SingularSpectrum& s) {
  const auto v = significant_values(s);
  if (v.empty()) detail::fail_numeric("spectral_entropy: all-zero spectrum");
  double total = 0.0;
  for (double x : v) total += x;
  double h = 0.0;
  for (double x : v) {
    const double p = x / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

/// floor(exp(H)). A relative 1e-9 guard absorbs rounding when exp(H) lands just below an
/// integer (a uniform spectrum of length 3 gives exp(H) = 2.9999999999999996).
inline std::size_t effective_rank(const SingularSpectrum& s) {
  const auto v = significant_values(s);
  if (v.empty()) detail::fail_numeric("effective_rank: all-zero spectrum");
  const double e = std::exp(spectral_entropy(s));
  const double r = std::floor(e + 1e-9 * e);
  return std::clamp<std::size_t>(static_cast<std::size_t>(r), 1, v.size());
}

/// sigma_1 / sigma_r with r the effective rank.
inline double effective_condition_number(const SingularSpectrum& s) {
  const auto v = significant_values(s);
  const std::size_t r = effective_rank(s);
  return v.front() / v[r - 1];
}

inline double harmonic_mean(double x, double y) { return 2.0 * x * y / (x + y); }

inline double econd_hm(const SingularSpectrum& sa, const SingularSpectrum& sb) {
  return harmonic_mean(effective_condition_number(sa), effective_condition_number(sb));
}

inline double econd_hm(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return econd_hm(singular_values(a), singular_values(b));
}

}  // namespace xlg
