#include <algorithm>
#include <limits>
#include <numeric>

#include "mds_detail.hpp"
#include "pgeo/error.hpp"
#include "pgeo/geometry.hpp"

namespace pgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric kNN adjacency: entry (i, j) is d_ij when joined, +inf otherwise.
Eigen::MatrixXd knn_graph(const Eigen::MatrixXd& d, int k) {
  const auto n = d.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, kInf);
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    order.erase(order.begin() + i);
    // Stable sort on index order: lower index wins equal dissimilarities.
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return d(i, a) < d(i, b); });
    for (int m = 0; m < k && m < static_cast<int>(order.size()); ++m) {
      const auto j = order[static_cast<std::size_t>(m)];
      g(i, j) = g(j, i) = d(i, j);
    }
  }
  return g;
}

int count_components(const Eigen::MatrixXd& graph) {
  const auto n = graph.rows();
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int count = 0;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    stack.push_back(s);
    component[s] = count;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (component[v] < 0 && graph(u, v) < kInf) {
          component[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

// Floyd-Warshall; N is tens of stimuli.
Eigen::MatrixXd shortest_paths(Eigen::MatrixXd dist) {
  const auto n = dist.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dim = dist(i, m);
      if (dim == kInf) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double via = dim + dist(m, j);
        if (via < dist(i, j)) dist(i, j) = via;
      }
    }
  }
  return dist;
}

}  // namespace

int knn_components(const DissimilarityMatrix& d, int k) { return count_components(knn_graph(d.values(), k)); }

Eigen::MatrixXd knn_geodesics(const DissimilarityMatrix& d, int k) {
  Eigen::MatrixXd g = shortest_paths(knn_graph(d.values(), k));
  // Symmetrize away summation-order noise.
  return 0.5 * (g + g.transpose());
}

EmbeddingConfig isomap(const DissimilarityMatrix& d, const IsomapOptions& opts) {
  detail::check_dimension(d, opts.p);
  const int max_k = static_cast<int>(d.size()) - 1;
  int k = opts.resolved_k(d.size());

  int components = knn_components(d, k);
  if (components > 1) {
    int suggested = k;
    while (suggested < max_k && knn_components(d, suggested) > 1) ++suggested;
    if (!opts.auto_connect) {
      throw Error(Stage::geometry, "kNN graph with k=" + std::to_string(k) + " has " +
                                       std::to_string(components) +
                                       " connected components; try k=" + std::to_string(suggested) +
                                       " or enable automatic k");
    }
    k = suggested;
  }

  EmbeddingConfig out;
  out.labels = d.labels();
  out.coords = detail::classical_coordinates(knn_geodesics(d, k), opts.p);
  out.stress = raw_stress(d.values(), out.coords);
  out.neighbors = k;
  return out;
}

}  // namespace pgeo
