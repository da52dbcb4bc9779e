#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "xlg/embedding.hpp"
#include "xlg/knn.hpp"

namespace xlg {

inline constexpr std::size_t kDefaultGhMaxPoints = 500;

struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;
  friend bool operator==(const PersistencePoint&, const PersistencePoint&) = default;
};

/// Finite bars only; the essential class is never stored.
struct PersistenceDiagram {
  std::vector<PersistencePoint> points;
};

/// Edge weights of the Euclidean minimum spanning tree (single-linkage merge heights),
/// ascending. Dense Prim, O(n^2) distance evaluations.
inline std::vector<double> mst_merge_heights(const RowMatrix& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  std::vector<double> heights;
  if (n <= 1) return heights;
  heights.reserve(n - 1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<char> in_tree(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    const double* c = points.row(static_cast<Eigen::Index>(current)).data();
    std::size_t next = n;
    double next_w = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double* p = points.row(static_cast<Eigen::Index>(v)).data();
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = c[j] - p[j];
        s += diff * diff;
      }
      best[v] = std::min(best[v], std::sqrt(s));
      if (next == n || best[v] < next_w) {
        next = v;
        next_w = best[v];
      }
    }
    in_tree[next] = 1;
    heights.push_back(next_w);
    current = next;
  }
  std::sort(heights.begin(), heights.end());
  return heights;
}

/// 0-dimensional diagram of the Vietoris-Rips filtration over the unit-normalized rows.
/// Only the first `max_points` rows are used.
inline PersistenceDiagram persistence_diagram_0d(const EmbeddingMatrix& m,
                                                 std::size_t max_points = kDefaultGhMaxPoints) {
  const auto rows = static_cast<Eigen::Index>(std::min(m.n_rows(), std::max<std::size_t>(max_points, 1)));
  const RowMatrix unit = normalize_rows(m.data().topRows(rows));
  PersistenceDiagram out;
  for (double h : mst_merge_heights(unit)) out.points.push_back({0.0, h});
  return out;
}

namespace detail {

inline double linf(const PersistencePoint& p, const PersistencePoint& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

inline double diagonal_cost(const PersistencePoint& p) { return (p.death - p.birth) / 2.0; }

// Hopcroft-Karp over a bipartite graph given by adjacency lists; returns matching size.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right)
      : adj_(adj), match_l_(adj.size(), kNone), match_r_(n_right, kNone), dist_(adj.size()) {}

  std::size_t run() {
    std::size_t size = 0;
    while (bfs())
      for (std::size_t u = 0; u < adj_.size(); ++u)
        if (match_l_[u] == kNone && dfs(u)) ++size;
    return size;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (match_l_[u] == kNone) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = kNone;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_r_[v];
        if (w == kNone) {
          found = true;
        } else if (dist_[w] == kNone) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_r_[v];
      if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_l_[u] = v;
        match_r_[v] = u;
        return true;
      }
    }
    dist_[u] = kNone;
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> match_l_;
  std::vector<std::size_t> match_r_;
  std::vector<std::size_t> dist_;
};

// Left side: points of d1, then diagonal copies of d2's points.
// Right side: points of d2, then diagonal copies of d1's points.
inline bool bottleneck_feasible(const std::vector<PersistencePoint>& d1, const std::vector<PersistencePoint>& d2,
                                double delta) {
  const std::size_t n1 = d1.size();
  const std::size_t n2 = d2.size();
  std::vector<std::vector<std::size_t>> adj(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j)
      if (linf(d1[i], d2[j]) <= delta) adj[i].push_back(j);
    if (diagonal_cost(d1[i]) <= delta) adj[i].push_back(n2 + i);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (diagonal_cost(d2[j]) <= delta) adj[n1 + j].push_back(j);
    for (std::size_t i = 0; i < n1; ++i) adj[n1 + j].push_back(n2 + i);
  }
  return BipartiteMatcher(adj, n1 + n2).run() == n1 + n2;
}

}  // namespace detail

/// Bottleneck distance under the L-infinity ground metric; a point may be matched to the
/// diagonal at half its persistence. Binary search over the finite set of candidate costs,
/// each probe a perfect-matching test.
inline double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  const auto& a = d1.points;
  const auto& b = d2.points;
  std::vector<double> candidates{0.0};
  candidates.reserve(1 + a.size() * b.size() + a.size() + b.size());
  for (const auto& p : a) {
    candidates.push_back(detail::diagonal_cost(p));
    for (const auto& q : b) candidates.push_back(detail::linf(p, q));
  }
  for (const auto& q : b) candidates.push_back(detail::diagonal_cost(q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // the largest candidate is always feasible
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (detail::bottleneck_feasible(a, b, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

/// Gromov-Hausdorff proxy: bottleneck distance between the two 0-dimensional diagrams.
inline double gh_distance(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                          std::size_t max_points = kDefaultGhMaxPoints) {
  return bottleneck_distance(persistence_diagram_0d(a, max_points), persistence_diagram_0d(b, max_points));
}

}  // namespace xlg
