#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pgeo/geometry.hpp"
#include "pgeo/stimuli.hpp"

namespace pgeo {

struct RsaResult {
  // Empty when either vector has zero rank variance (every entry tied); that
  // is "undefined", which is not the same as a correlation of 0.
  std::optional<double> rho;
  std::size_t n_pairs = 0;
};

struct ProcrustesResult {
  double score = 0.0;         // 1 - residual / 2, in [0, 1]
  double residual = 0.0;      // |A R - B|_F^2 on centered unit-norm configs, in [0, 2]
  Eigen::MatrixXd rotation;   // p x p orthogonal, reflections allowed
  Eigen::MatrixXd aligned;    // A R, for plotting over the target
};

// Fractional ranks (1-based, ties get the mean of the positions they span).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman correlation with average ranks for ties. Empty if undefined.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// RSA: Spearman correlation of the strict upper triangles. Labels must agree
// in order and N >= 4.
RsaResult rsa(const DissimilarityMatrix& model, const DissimilarityMatrix& human);

// Orthogonal Procrustes on raw coordinate matrices (same shape, rows paired).
// Both are centered and scaled to unit Frobenius norm first. Throws
// Error(Stage::alignment) when either configuration collapses to a point.
ProcrustesResult procrustes(const Eigen::MatrixXd& source, const Eigen::MatrixXd& target);

// GPA score between a model map and the human map: labels and dimension must
// match and N >= p + 1.
ProcrustesResult gpa(const EmbeddingConfig& model, const EmbeddingConfig& human);

}  // namespace pgeo
