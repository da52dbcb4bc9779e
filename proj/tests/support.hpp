#pragma once

// Test-only data generators and independent oracles. Nothing here calls into the code
// path it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "xlg/embedding.hpp"
#include "xlg/knn.hpp"
#include "xlg/persistence.hpp"

namespace xlg::testkit {

inline RowMatrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> nd(0.0, sigma);
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng);
  return m;
}

inline Eigen::MatrixXd random_orthogonal(std::size_t d, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = gaussian(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

inline EmbeddingMatrix embed(const std::string& lang, RowMatrix m) { return EmbeddingMatrix(lang, std::move(m)); }

// Full pairwise cosine sort, computed from raw rows as dot / (|u| |v|).
inline std::vector<NeighborList> knn_oracle(const RowMatrix& q, const RowMatrix& t, std::size_t k) {
  std::vector<NeighborList> out;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    std::vector<Neighbor> all;
    for (Eigen::Index j = 0; j < t.rows(); ++j) {
      double dot = 0.0, nq = 0.0, nt = 0.0;
      for (Eigen::Index c = 0; c < q.cols(); ++c) {
        dot += q(i, c) * t(j, c);
        nq += q(i, c) * q(i, c);
        nt += t(j, c) * t(j, c);
      }
      all.push_back({static_cast<std::size_t>(j), dot / (std::sqrt(nq) * std::sqrt(nt))});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.cosine > b.cosine || (a.cosine == b.cosine && a.index < b.index);
    });
    all.resize(k);
    out.push_back({static_cast<std::size_t>(i), all});
  }
  return out;
}

// Kruskal over all edges with union-find.
inline std::vector<double> mst_oracle(const RowMatrix& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  struct Edge {
    double w;
    std::size_t u, v;
  };
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      edges.push_back({(p.row(static_cast<Eigen::Index>(u)) - p.row(static_cast<Eigen::Index>(v))).norm(), u, v});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w < b.w; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<double> out;
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      out.push_back(e.w);
    }
  }
  return out;
}

// Minimum over every partial matching of the maximum cost; unmatched points pay their
// diagonal cost (d - b) / 2.
inline double bottleneck_oracle(const std::vector<PersistencePoint>& a, const std::vector<PersistencePoint>& b) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(b.size(), 0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cur) {
    if (cur >= best) return;
    if (i == a.size()) {
      double c = cur;
      for (std::size_t j = 0; j < b.size(); ++j)
        if (!used[j]) c = std::max(c, (b[j].death - b[j].birth) / 2.0);
      best = std::min(best, c);
      return;
    }
    rec(i + 1, std::max(cur, (a[i].death - a[i].birth) / 2.0));
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      const double c = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
      rec(i + 1, std::max(cur, c));
      used[j] = 0;
    }
  };
  rec(0, 0.0);
  return best;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("xlg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace xlg::testkit
