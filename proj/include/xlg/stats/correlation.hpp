#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "xlg/error.hpp"

namespace xlg::stats {

/// Sample Pearson correlation (two-pass, mean-centred).
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) xlg::detail::fail_input("pearson: length mismatch");
  if (x.size() < 3) xlg::detail::fail_input("pearson: need at least 3 observations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) xlg::detail::fail_numeric("pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// Correlation of variable 1 with variable 2 after removing variable 3 from variable 2 only.
inline double semipartial(double r12, double r13, double r23) {
  if (!(std::abs(r23) < 1.0)) xlg::detail::fail_numeric("semipartial: |r23| must be below 1");
  return (r12 - r13 * r23) / std::sqrt(1.0 - r23 * r23);
}

}  // namespace xlg::stats
