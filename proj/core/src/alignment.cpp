#include "pgeo/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "pgeo/error.hpp"

namespace pgeo {

namespace {

void require_same_labels(const std::vector<std::string>& a, const std::vector<std::string>& b,
                         const char* what) {
  if (a.size() != b.size()) {
    throw Error(Stage::alignment, std::string(what) + ": stimulus counts differ (" +
                                      std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      throw Error(Stage::alignment, std::string(what) + ": label mismatch at position " + std::to_string(i) +
                                        ": '" + a[i] + "' vs '" + b[i] + "'");
    }
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    // Positions start..end-1 (0-based) share rank mean((start+1)..end).
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t m = start; m < end; ++m) ranks[order[m]] = rank;
    start = end;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvariantError("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);

  // Doubled average ranks are integers, so these sums are exact while they
  // stay below 2^53; identical rankings then give exactly 1.
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = 2.0 * rx[i];
    const double b = 2.0 * ry[i];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  const double cov = n * sxy - sx * sy;
  const double var_x = n * sxx - sx * sx;
  const double var_y = n * syy - sy * sy;
  if (!(var_x > 0.0) || !(var_y > 0.0)) return std::nullopt;
  const double rho = (cov / var_x) * std::sqrt(var_x / var_y);
  return std::clamp(rho, -1.0, 1.0);
}

RsaResult rsa(const DissimilarityMatrix& model, const DissimilarityMatrix& human) {
  require_same_labels(model.labels(), human.labels(), "RSA");
  if (model.size() < 4) {
    throw Error(Stage::alignment, "RSA needs at least 4 stimuli, got " + std::to_string(model.size()));
  }
  const auto a = model.upper_triangle();
  const auto b = human.upper_triangle();
  return {spearman(a, b), a.size()};
}

ProcrustesResult procrustes(const Eigen::MatrixXd& source, const Eigen::MatrixXd& target) {
  if (source.rows() != target.rows() || source.cols() != target.cols()) {
    throw Error(Stage::alignment, "Procrustes inputs differ in shape");
  }
  auto normalize = [](const Eigen::MatrixXd& y, const char* which) {
    Eigen::MatrixXd c = y.rowwise() - y.colwise().mean();
    const double raw = y.norm();
    const double norm = c.norm();
    if (!(raw > 0.0) || !(norm > 1e-13 * raw)) {
      throw Error(Stage::alignment, std::string(which) + " configuration is degenerate (all points coincide)");
    }
    return Eigen::MatrixXd(c / norm);
  };
  const Eigen::MatrixXd a = normalize(source, "model");
  const Eigen::MatrixXd b = normalize(target, "human");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  const double trace = svd.singularValues().sum();
  out.residual = std::clamp(2.0 - 2.0 * trace, 0.0, 2.0);
  out.score = 1.0 - out.residual / 2.0;
  out.aligned = a * out.rotation;
  return out;
}

ProcrustesResult gpa(const EmbeddingConfig& model, const EmbeddingConfig& human) {
  require_same_labels(model.labels, human.labels, "GPA");
  if (model.dim() != human.dim()) {
    throw Error(Stage::alignment, "GPA dimension mismatch (" + std::to_string(model.dim()) + " vs " +
                                      std::to_string(human.dim()) + ")");
  }
  if (model.coords.rows() < model.coords.cols() + 1) {
    throw Error(Stage::alignment, "GPA needs N >= p + 1");
  }
  return procrustes(model.coords, human.coords);
}

}  // namespace pgeo
