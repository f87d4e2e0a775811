#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pgeo/stimuli.hpp"

namespace pgeo {

// A low-dimensional geometric map: one row of coordinates per stimulus.
struct EmbeddingConfig {
  std::vector<std::string> labels;
  Eigen::MatrixXd coords;           // N x p
  std::optional<double> stress;     // raw stress against the source dissimilarities
  std::optional<int> neighbors;     // k actually used (Isomap only)

  int dim() const noexcept { return static_cast<int>(coords.cols()); }
  std::size_t size() const noexcept { return labels.size(); }

  // Throws InvariantError if coordinates are non-finite or the shape is off.
  void validate() const;
};

struct MdsOptions {
  int p = 2;
  int max_iterations = 300;
  double rel_tolerance = 1e-6;
  int restarts = 0;          // seeded random starts beyond the classical start
  std::uint64_t seed = 0;

  void validate() const;
};

struct IsomapOptions {
  std::optional<int> k;      // default min(N - 1, 6)
  int p = 2;
  bool auto_connect = false;

  int resolved_k(std::size_t n) const;
};

// D[i][j] = 1 - <h_i, h_j> / (|h_i| |h_j|) in double precision, clamped to
// [0, 2], exact zero diagonal. Throws Error(Stage::geometry) naming the label
// of any zero-norm or non-finite row.
DissimilarityMatrix cosine_dissimilarity(const Eigen::MatrixXd& vectors,
                                         const std::vector<std::string>& labels);

// Torgerson scaling: top-p eigenvectors of -1/2 J (D∘D) J scaled by
// sqrt(max(lambda, 0)). Output is column-centered. Eigenvector signs are fixed
// so that the largest-magnitude entry of each column is positive (first index
// on ties), which makes the result deterministic.
EmbeddingConfig classical_mds(const DissimilarityMatrix& d, int p);

// Raw stress  sum_{i<j} (d_ij - |y_i - y_j|)^2.
double raw_stress(const Eigen::MatrixXd& d, const Eigen::MatrixXd& coords);

// Kruskal stress-1 on raw stress: sqrt(stress / sum_{i<j} d_ij^2); 0 when D is all zero.
double normalized_stress(const Eigen::MatrixXd& d, double raw);

// One SMACOF run from a given starting configuration.
struct SmacofRun {
  Eigen::MatrixXd coords;
  std::vector<double> stress_trace;  // stress of the start, then after each Guttman step
  int iterations = 0;
  bool converged = false;

  double final_stress() const { return stress_trace.back(); }
};

SmacofRun smacof_from(const Eigen::MatrixXd& d, Eigen::MatrixXd start, int max_iterations,
                      double rel_tolerance);

// Metric MDS by stress majorization. Starts from classical_mds, then from
// `restarts` random configurations seeded by (seed, restart index), and keeps
// the lowest final stress (earliest run wins ties). Result is centered.
EmbeddingConfig smacof_mds(const DissimilarityMatrix& d, const MdsOptions& opts = {});

// Every run smacof_mds would perform, in order (index 0 is the classical start).
std::vector<SmacofRun> smacof_runs(const DissimilarityMatrix& d, const MdsOptions& opts = {});

// Classical MDS on k-nearest-neighbour graph geodesics. The graph joins i and
// j when either is among the other's k nearest (lower index wins ties), with
// weight d_ij. A disconnected graph is an error unless auto_connect is set,
// in which case k grows until the graph is connected. `stress` is measured
// against the input dissimilarities.
EmbeddingConfig isomap(const DissimilarityMatrix& d, const IsomapOptions& opts = {});

// All-pairs shortest paths over the symmetric kNN graph; +inf where unreachable.
Eigen::MatrixXd knn_geodesics(const DissimilarityMatrix& d, int k);

// Number of connected components of the symmetric kNN graph.
int knn_components(const DissimilarityMatrix& d, int k);

// Euclidean distances between embedding rows.
DissimilarityMatrix embedding_to_dissimilarity(const EmbeddingConfig& y);

}  // namespace pgeo
