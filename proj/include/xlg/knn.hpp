#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "xlg/embedding.hpp"
#include "xlg/error.hpp"
#include "xlg/parallel.hpp"

namespace xlg {

struct Neighbor {
  std::size_t index = 0;
  double cosine = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k most similar targets of one query, most similar first; equal cosines are
/// ordered by lower target index.
struct NeighborList {
  std::size_t query_index = 0;
  std::vector<Neighbor> neighbors;

  double cosine_sum() const {
    double s = 0.0;
    for (const auto& n : neighbors) s += n.cosine;
    return s;
  }
};

namespace detail {

// Every cosine in this library goes through this loop so that the same pair of
// unit rows always yields bit-identical values.
inline double dot(const double* u, const double* v, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += u[j] * v[j];
  return s;
}

inline void dot4(const double* q, const double* t0, const double* t1, const double* t2,
                 const double* t3, std::size_t d, double* out) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double x = q[j];
    s0 += x * t0[j];
    s1 += x * t1[j];
    s2 += x * t2[j];
    s3 += x * t3[j];
  }
  out[0] = s0;
  out[1] = s1;
  out[2] = s2;
  out[3] = s3;
}

inline bool ranks_before(const Neighbor& x, const Neighbor& y) {
  return x.cosine > y.cosine || (x.cosine == y.cosine && x.index < y.index);
}

}  // namespace detail

inline double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    detail::fail_input("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                       std::to_string(v.size()));
  const double nu = std::sqrt(detail::dot(u.data(), u.data(), u.size()));
  const double nv = std::sqrt(detail::dot(v.data(), v.data(), v.size()));
  if (nu == 0.0 || nv == 0.0) detail::fail_numeric("cosine: zero-norm vector");
  return detail::dot(u.data(), v.data(), u.size()) / (nu * nv);
}

/// Copy of `m` with every row scaled to unit Euclidean norm.
inline RowMatrix normalize_rows(const RowMatrix& m) {
  RowMatrix out = m;
  const auto d = static_cast<std::size_t>(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i).data();
    const double norm = std::sqrt(detail::dot(row, row, d));
    if (norm == 0.0) detail::fail_numeric("zero row " + std::to_string(i) + " cannot be normalized");
    out.row(i) /= norm;
  }
  return out;
}

/// Cosine between row i of `a` and row j of `b`, both already unit-normalized.
inline double unit_cosine(const RowMatrix& a, Eigen::Index i, const RowMatrix& b, Eigen::Index j) {
  return detail::dot(a.row(i).data(), b.row(j).data(), static_cast<std::size_t>(a.cols()));
}

/// Exact k-NN by cosine over unit-normalized rows.
/// Similarities are computed in query blocks against the full target set; each block is
/// an independent work unit.
inline std::vector<NeighborList> knn_search_unit(const RowMatrix& queries, const RowMatrix& targets,
                                                 std::size_t k, std::size_t workers = 0) {
  const auto n_targets = static_cast<std::size_t>(targets.rows());
  if (k < 1 || k > n_targets)
    detail::fail_input("knn_search: k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(n_targets) + "]");
  if (queries.cols() != targets.cols())
    detail::fail_input("knn_search: dimension mismatch " + std::to_string(queries.cols()) + " vs " +
                       std::to_string(targets.cols()));
  const auto n_queries = static_cast<std::size_t>(queries.rows());
  const auto d = static_cast<std::size_t>(queries.cols());
  constexpr std::size_t kQueryBlock = 32;
  constexpr std::size_t kTargetBlock = 256;

  std::vector<NeighborList> result(n_queries);
  const std::size_t n_blocks = (n_queries + kQueryBlock - 1) / kQueryBlock;
  parallel_for(
      n_blocks,
      [&](std::size_t block) {
        const std::size_t q_lo = block * kQueryBlock;
        const std::size_t q_hi = std::min(n_queries, q_lo + kQueryBlock);
        std::vector<double> sims((q_hi - q_lo) * n_targets);
        for (std::size_t t_lo = 0; t_lo < n_targets; t_lo += kTargetBlock) {
          const std::size_t t_hi = std::min(n_targets, t_lo + kTargetBlock);
          for (std::size_t q = q_lo; q < q_hi; ++q) {
            const double* qrow = queries.row(static_cast<Eigen::Index>(q)).data();
            double* out = sims.data() + (q - q_lo) * n_targets;
            std::size_t t = t_lo;
            for (; t + 4 <= t_hi; t += 4)
              detail::dot4(qrow, targets.row(static_cast<Eigen::Index>(t)).data(),
                           targets.row(static_cast<Eigen::Index>(t + 1)).data(),
                           targets.row(static_cast<Eigen::Index>(t + 2)).data(),
                           targets.row(static_cast<Eigen::Index>(t + 3)).data(), d, out + t);
            for (; t < t_hi; ++t)
              out[t] = detail::dot(qrow, targets.row(static_cast<Eigen::Index>(t)).data(), d);
          }
        }
        std::vector<Neighbor> cand(n_targets);
        for (std::size_t q = q_lo; q < q_hi; ++q) {
          const double* row = sims.data() + (q - q_lo) * n_targets;
          for (std::size_t t = 0; t < n_targets; ++t) cand[t] = Neighbor{t, row[t]};
          std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(),
                            detail::ranks_before);
          result[q].query_index = q;
          result[q].neighbors.assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
        }
      },
      workers);
  return result;
}

inline std::vector<NeighborList> knn_search(const EmbeddingMatrix& queries, const EmbeddingMatrix& targets,
                                            std::size_t k, std::size_t workers = 0) {
  if (queries.dim() != targets.dim())
    detail::fail_input("knn_search: dimension mismatch " + std::to_string(queries.dim()) + " vs " +
                       std::to_string(targets.dim()));
  return knn_search_unit(normalize_rows(queries.data()), normalize_rows(targets.data()), k, workers);
}

}  // namespace xlg
