#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xlg/embedding.hpp"
#include "xlg/error.hpp"
#include "xlg/knn.hpp"

namespace xlg {

inline constexpr std::size_t kDefaultMarginK = 4;

struct MinedPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double margin = 0.0;
  friend bool operator==(const MinedPair&, const MinedPair&) = default;
};

enum class Direction { forward, backward, intersection };

/// Pairs are always expressed as (row in A, row in B), whatever the search direction.
struct MinedAlignment {
  std::vector<MinedPair> pairs;
  Direction direction = Direction::forward;
};

struct RetrievalScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_gold = 0;
  std::size_t n_mined = 0;
  std::size_t n_correct = 0;
};

/// Ratio margin: 2k cos(x,y) / (sum of x's k neighbour cosines + sum of y's).
inline double margin_score(double cos_xy, const NeighborList& nn_x, const NeighborList& nn_y, std::size_t k) {
  if (nn_x.neighbors.size() != k || nn_y.neighbors.size() != k)
    detail::fail_input("margin_score: neighbour lists must hold exactly k=" + std::to_string(k) + " entries");
  const double denom = nn_x.cosine_sum() + nn_y.cosine_sum();
  if (denom <= 1e-12) detail::fail_numeric("margin_score: non-positive neighbourhood denominator");
  return 2.0 * static_cast<double>(k) * cos_xy / denom;
}

/// Row-vector overload; the rows need not be normalized.
inline double margin_score(std::span<const double> x, std::span<const double> y, const NeighborList& nn_x,
                           const NeighborList& nn_y, std::size_t k) {
  return margin_score(cosine(x, y), nn_x, nn_y, k);
}

namespace detail {

// Unit rows of both sides plus k-NN lists in both directions.
struct MarginContext {
  RowMatrix a;
  RowMatrix b;
  std::size_t k;
  std::vector<NeighborList> nn_ab;  // for each row of a, neighbours in b
  std::vector<NeighborList> nn_ba;  // for each row of b, neighbours in a

  MarginContext(const EmbeddingMatrix& ea, const EmbeddingMatrix& eb, std::size_t k_, std::size_t workers)
      : a(normalize_rows(ea.data())), b(normalize_rows(eb.data())), k(k_) {
    if (ea.dim() != eb.dim())
      fail_input("mining: dimension mismatch " + std::to_string(ea.dim()) + " vs " + std::to_string(eb.dim()));
    nn_ab = knn_search_unit(a, b, k, workers);
    nn_ba = knn_search_unit(b, a, k, workers);
  }

  double margin(std::size_t i, std::size_t j) const {
    return margin_score(unit_cosine(a, static_cast<Eigen::Index>(i), b, static_cast<Eigen::Index>(j)),
                        nn_ab[i], nn_ba[j], k);
  }

  MinedAlignment forward() const {
    MinedAlignment out{{}, Direction::forward};
    out.pairs.reserve(nn_ab.size());
    for (std::size_t i = 0; i < nn_ab.size(); ++i) {
      MinedPair best{i, 0, -std::numeric_limits<double>::infinity()};
      bool have = false;
      for (const auto& cand : nn_ab[i].neighbors) {
        const double m = margin_score(cand.cosine, nn_ab[i], nn_ba[cand.index], k);
        if (!have || m > best.margin || (m == best.margin && cand.index < best.b)) {
          best = MinedPair{i, cand.index, m};
          have = true;
        }
      }
      out.pairs.push_back(best);
    }
    return out;
  }

  MinedAlignment backward() const {
    MinedAlignment out{{}, Direction::backward};
    out.pairs.reserve(nn_ba.size());
    for (std::size_t j = 0; j < nn_ba.size(); ++j) {
      MinedPair best{0, j, -std::numeric_limits<double>::infinity()};
      bool have = false;
      for (const auto& cand : nn_ba[j].neighbors) {
        const double m = margin_score(cand.cosine, nn_ab[cand.index], nn_ba[j], k);
        if (!have || m > best.margin || (m == best.margin && cand.index < best.a)) {
          best = MinedPair{cand.index, j, m};
          have = true;
        }
      }
      out.pairs.push_back(best);
    }
    return out;
  }
};

inline void check_k(const EmbeddingMatrix& x, const EmbeddingMatrix& y, std::size_t k) {
  if (k < 1 || k > std::min(x.n_rows(), y.n_rows()))
    fail_input("mining: k=" + std::to_string(k) + " outside [1, " +
               std::to_string(std::min(x.n_rows(), y.n_rows())) + "]");
}

}  // namespace detail

/// For every source row, the target among its k cosine-nearest that maximizes the margin.
/// Pairs are (source row, target row).
inline MinedAlignment mine_direction(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, std::size_t k,
                                     std::size_t workers = 0) {
  detail::check_k(src, tgt, k);
  return detail::MarginContext(src, tgt, k, workers).forward();
}

/// Forward pairs that the backward search also produced; scores are the forward ones.
inline MinedAlignment intersect(const MinedAlignment& forward, const MinedAlignment& backward) {
  std::set<std::pair<std::size_t, std::size_t>> back;
  for (const auto& p : backward.pairs) back.emplace(p.a, p.b);
  MinedAlignment out{{}, Direction::intersection};
  for (const auto& p : forward.pairs)
    if (back.count({p.a, p.b})) out.pairs.push_back(p);
  return out;
}

inline MinedAlignment mine_intersection(const EmbeddingMatrix& a, const EmbeddingMatrix& b, std::size_t k,
                                        std::size_t workers = 0) {
  detail::check_k(a, b, k);
  const detail::MarginContext ctx(a, b, k, workers);
  return intersect(ctx.forward(), ctx.backward());
}

inline RetrievalScore retrieval_f1(const MinedAlignment& mined, const Alignment& gold) {
  if (gold.empty()) detail::fail_input("retrieval_f1: empty gold alignment");
  std::set<std::pair<std::size_t, std::size_t>> gold_set;
  for (const auto& g : gold) gold_set.emplace(g.a, g.b);
  std::set<std::pair<std::size_t, std::size_t>> mined_set;
  for (const auto& p : mined.pairs) mined_set.emplace(p.a, p.b);
  RetrievalScore s;
  s.n_gold = gold_set.size();
  s.n_mined = mined_set.size();
  for (const auto& p : mined_set) s.n_correct += gold_set.count(p);
  s.precision = s.n_mined ? static_cast<double>(s.n_correct) / static_cast<double>(s.n_mined) : 0.0;
  s.recall = static_cast<double>(s.n_correct) / static_cast<double>(s.n_gold);
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

/// Mean margin over the gold-aligned rows, neighbourhoods taken over the full opposite matrix.
inline double average_margin(const BitextPair& pair, std::size_t k, std::size_t workers = 0) {
  if (pair.gold.empty()) detail::fail_input("average_margin: empty gold alignment");
  detail::check_k(pair.a, pair.b, k);
  const detail::MarginContext ctx(pair.a, pair.b, k, workers);
  double sum = 0.0;
  for (const auto& g : pair.gold) sum += ctx.margin(g.a, g.b);
  return sum / static_cast<double>(pair.gold.size());
}

}  // namespace xlg
