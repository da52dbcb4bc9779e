#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>
#include <string_view>

#include "xlg/embedding.hpp"
#include "xlg/isomorphism.hpp"
#include "xlg/mining.hpp"
#include "xlg/persistence.hpp"

namespace xlg {

/// The five dependent variables: retrieval F1, average margin, SVG, ECOND-HM and GH.
struct AlignmentMetrics {
  double f1 = 0.0;
  double avg_margin = 0.0;
  double svg = 0.0;
  double econd_hm = 0.0;
  double gh = 0.0;

  static constexpr std::size_t size() { return 5; }
  double operator[](std::size_t i) const {
    const double v[] = {f1, avg_margin, svg, econd_hm, gh};
    return v[i];
  }
  double& operator[](std::size_t i) {
    double* v[] = {&f1, &avg_margin, &svg, &econd_hm, &gh};
    return *v[i];
  }
  friend bool operator==(const AlignmentMetrics&, const AlignmentMetrics&) = default;
};

inline constexpr std::array<std::string_view, 5> kMetricNames = {"f1", "avg_margin", "svg", "econd_hm", "gh"};

struct MetricParams {
  std::size_t k = kDefaultMarginK;
  std::size_t gh_max_points = kDefaultGhMaxPoints;
  std::size_t workers = 0;
};

/// Rows of `a` and `b` listed by the gold alignment, in gold (shared-ID) order.
inline std::pair<EmbeddingMatrix, EmbeddingMatrix> gold_submatrices(const BitextPair& pair) {
  const auto n = static_cast<Eigen::Index>(pair.gold.size());
  RowMatrix a(n, pair.a.data().cols());
  RowMatrix b(n, pair.b.data().cols());
  std::vector<std::string> ids;
  ids.reserve(pair.gold.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& g = pair.gold[static_cast<std::size_t>(r)];
    a.row(r) = pair.a.data().row(static_cast<Eigen::Index>(g.a));
    b.row(r) = pair.b.data().row(static_cast<Eigen::Index>(g.b));
    ids.push_back(pair.a.ids()[g.a]);
  }
  return {EmbeddingMatrix(pair.a.lang(), std::move(a), ids), EmbeddingMatrix(pair.b.lang(), std::move(b), ids)};
}

/// Retrieval metrics use the full matrices (unshared rows act as distractors); the three
/// isomorphism measures use the gold-aligned rows only.
inline AlignmentMetrics compute_alignment_metrics(const BitextPair& pair, const MetricParams& params = {}) {
  AlignmentMetrics m;
  const std::size_t k = std::min({params.k, pair.a.n_rows(), pair.b.n_rows()});
  m.f1 = retrieval_f1(mine_intersection(pair.a, pair.b, k, params.workers), pair.gold).f1;
  m.avg_margin = average_margin(pair, k, params.workers);
  const auto [ga, gb] = gold_submatrices(pair);
  const auto sa = singular_values(ga);
  const auto sb = singular_values(gb);
  m.svg = svg(sa, sb);
  m.econd_hm = econd_hm(sa, sb);
  m.gh = gh_distance(ga, gb, params.gh_max_points);
  return m;
}

}  // namespace xlg
