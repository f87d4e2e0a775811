#include "pgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "cosine.hpp"
#include "mds_detail.hpp"
#include "pgeo/error.hpp"

namespace pgeo {

namespace detail {

Eigen::MatrixXd cosine_distances(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels,
                                 Stage stage) {
  const auto n = rows.rows();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw Error(stage, "got " + std::to_string(n) + " vectors for " + std::to_string(labels.size()) + " labels");
  }
  Eigen::VectorXd norms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!rows.row(i).allFinite()) throw Error(stage, "non-finite vector for stimulus '" + labels[i] + "'");
    norms(i) = rows.row(i).norm();
    if (!(norms(i) > 0.0)) throw Error(stage, "zero-norm vector for stimulus '" + labels[i] + "'");
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double cos = rows.row(i).dot(rows.row(j)) / (norms(i) * norms(j));
      d(i, j) = d(j, i) = std::clamp(1.0 - cos, 0.0, 2.0);
    }
  }
  return d;
}

}  // namespace detail

void EmbeddingConfig::validate() const {
  if (coords.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw InvariantError("embedding has " + std::to_string(coords.rows()) + " rows for " +
                         std::to_string(labels.size()) + " labels");
  }
  if (!coords.allFinite()) throw InvariantError("embedding has non-finite coordinates");
  if (coords.rows() < coords.cols() + 1) throw InvariantError("embedding needs N >= p + 1");
}

void MdsOptions::validate() const {
  if (p != 2 && p != 3) throw Error(Stage::geometry, "map dimension must be 2 or 3, got " + std::to_string(p));
  if (max_iterations < 1) throw Error(Stage::geometry, "max_iterations must be >= 1");
  if (!(rel_tolerance > 0.0)) throw Error(Stage::geometry, "rel_tolerance must be > 0");
  if (restarts < 0) throw Error(Stage::geometry, "restarts must be >= 0");
}

int IsomapOptions::resolved_k(std::size_t n) const {
  const int max_k = static_cast<int>(n) - 1;
  const int value = k.value_or(std::min(max_k, 6));
  if (value < 1 || value > max_k) {
    throw Error(Stage::geometry, "neighbour count k=" + std::to_string(value) + " outside [1, " +
                                     std::to_string(max_k) + "]");
  }
  return value;
}

DissimilarityMatrix cosine_dissimilarity(const Eigen::MatrixXd& vectors,
                                         const std::vector<std::string>& labels) {
  if (vectors.rows() < 2) throw Error(Stage::geometry, "cosine dissimilarity needs at least 2 vectors");
  return {labels, detail::cosine_distances(vectors, labels, Stage::geometry)};
}

double raw_stress(const Eigen::MatrixXd& d, const Eigen::MatrixXd& coords) {
  const auto n = d.rows();
  double stress = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = d(i, j) - (coords.row(i) - coords.row(j)).norm();
      stress += r * r;
    }
  }
  return stress;
}

double normalized_stress(const Eigen::MatrixXd& d, double raw) {
  double total = 0.0;
  const auto n = d.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) total += d(i, j) * d(i, j);
  }
  return total > 0.0 ? std::sqrt(raw / total) : 0.0;
}

void detail::center_columns(Eigen::MatrixXd& y) {
  if (y.rows() == 0) return;
  const Eigen::RowVectorXd mean = y.colwise().mean();
  y.rowwise() -= mean;
}

void detail::check_dimension(const DissimilarityMatrix& d, int p) {
  if (p != 2 && p != 3) throw Error(Stage::geometry, "map dimension must be 2 or 3, got " + std::to_string(p));
  if (d.size() < static_cast<std::size_t>(p) + 1) {
    throw Error(Stage::geometry, "need at least " + std::to_string(p + 1) + " stimuli for a " +
                                     std::to_string(p) + "-dimensional map, got " + std::to_string(d.size()));
  }
}

Eigen::MatrixXd detail::classical_coordinates(const Eigen::MatrixXd& d, int p) {
  const auto n = d.rows();
  if (!d.allFinite()) throw Error(Stage::geometry, "classical MDS input is not finite");
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, p);
  if (d.cwiseAbs().maxCoeff() == 0.0) return coords;

  // B = -1/2 J (D∘D) J, computed by subtracting row, column and grand means.
  const Eigen::MatrixXd sq = d.cwiseProduct(d);
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double grand = sq.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + grand);
    }
  }
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw Error(Stage::geometry, "eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  for (int c = 0; c < p; ++c) {
    const Eigen::Index idx = n - 1 - c;
    const double lambda = eig.eigenvalues()(idx);
    if (!(lambda > 0.0)) continue;
    Eigen::VectorXd v = eig.eigenvectors().col(idx);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0.0) v = -v;
    coords.col(c) = v * std::sqrt(lambda);
  }
  detail::center_columns(coords);
  return coords;
}

EmbeddingConfig classical_mds(const DissimilarityMatrix& d, int p) {
  detail::check_dimension(d, p);
  EmbeddingConfig out;
  out.labels = d.labels();
  out.coords = detail::classical_coordinates(d.values(), p);
  out.stress = raw_stress(d.values(), out.coords);
  return out;
}

DissimilarityMatrix embedding_to_dissimilarity(const EmbeddingConfig& y) {
  const auto n = y.coords.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (y.coords.row(i) - y.coords.row(j)).norm();
  }
  return {y.labels, std::move(d)};
}

}  // namespace pgeo
