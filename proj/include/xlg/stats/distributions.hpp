#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "xlg/error.hpp"

namespace xlg::stats {

namespace detail {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  xlg::detail::fail_numeric("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) xlg::detail::fail_input("incomplete_beta: shape parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// P(F > f) for F ~ F(d1, d2).
inline double f_upper_tail(double f, double d1, double d2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

/// Two-sided P(|T| > t) for T ~ Student t with df degrees of freedom.
inline double t_two_sided(double t, double df) {
  t = std::abs(t);
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// 64-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration.
struct GaussLegendre64 {
  static constexpr int kN = 64;
  std::array<double, kN> x{};
  std::array<double, kN> w{};

  GaussLegendre64() {
    for (int i = 0; i < kN / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kN + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p1 = 1.0;
        double p2 = 0.0;
        for (int j = 1; j <= kN; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = kN * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-15) break;
      }
      x[i] = -z;
      x[kN - 1 - i] = z;
      w[i] = w[kN - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }

  static const GaussLegendre64& instance() {
    static const GaussLegendre64 rule;
    return rule;
  }

  /// Integral of f over [lo, hi] split into `panels` equal panels.
  template <typename F>
  double integrate(F&& f, double lo, double hi, int panels) const {
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      const double half = width / 2.0;
      double s = 0.0;
      for (int i = 0; i < kN; ++i) s += w[i] * f(mid + half * x[i]);
      total += s * half;
    }
    return total;
  }
};

/// P(range of k iid standard normals < w).
inline double normal_range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  const auto& gl = GaussLegendre64::instance();
  const double v = gl.integrate(
      [&](double z) {
        const double inner = normal_cdf(z) - normal_cdf(z - w);
        return inner > 0.0 ? normal_pdf(z) * std::pow(inner, k - 1) : 0.0;
      },
      -8.5, 8.5, 12);
  return std::min(1.0, k * v);
}

/// CDF of the studentized range distribution with k groups and df error degrees of freedom:
/// the normal range CDF at q*s integrated against the density of s = sqrt(chi2_df / df).
inline double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) xlg::detail::fail_input("studentized range needs k >= 2");
  if (!(df > 0.0)) xlg::detail::fail_input("studentized range needs df > 0");
  if (q <= 0.0) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (df > 1e6) return normal_range_cdf(q, k);
  const auto& gl = GaussLegendre64::instance();
  const double log_norm = 0.5 * df * std::log(df) - std::lgamma(df / 2.0) - (df / 2.0 - 1.0) * std::numbers::ln2;
  const double mode = std::sqrt(std::max(df - 1.0, 0.0) / df);
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double lo = std::max(0.0, mode - 14.0 * spread);
  const double hi = mode + 14.0 * spread + (df < 4.0 ? 6.0 : 0.0);
  const double v = gl.integrate(
      [&](double s) {
        if (s <= 0.0) return 0.0;
        const double log_density = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
        return std::exp(log_density) * normal_range_cdf(q * s, k);
      },
      lo, hi, 16);
  return std::clamp(v, 0.0, 1.0);
}

/// Upper-tail p-value of the studentized range statistic.
inline double studentized_range_p(double q, int k, double df) { return 1.0 - studentized_range_cdf(q, k, df); }

}  // namespace xlg::stats
