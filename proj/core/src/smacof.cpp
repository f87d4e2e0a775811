#include <cmath>

#include "mds_detail.hpp"
#include "pgeo/error.hpp"
#include "pgeo/geometry.hpp"
#include "pgeo/random.hpp"

namespace pgeo {

namespace {

// Guttman transform with unit weights: X' = (1/n) B(X) X.
Eigen::MatrixXd guttman_step(const Eigen::MatrixXd& d, const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      if (dist > 0.0) b(i, j) = b(j, i) = -d(i, j) / dist;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return (b * x) / static_cast<double>(n);
}

Eigen::MatrixXd random_start(const Eigen::MatrixXd& d, int p, std::uint64_t seed, int restart) {
  StreamRng rng{seed, 0x736d61636f66ULL, static_cast<std::uint64_t>(restart)};
  const auto n = d.rows();
  const double scale = n > 1 ? d.sum() / static_cast<double>(n * (n - 1)) : 1.0;
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) x(i, c) = (2.0 * rng.uniform() - 1.0) * (scale > 0.0 ? scale : 1.0);
  }
  detail::center_columns(x);
  return x;
}

}  // namespace

SmacofRun smacof_from(const Eigen::MatrixXd& d, Eigen::MatrixXd start, int max_iterations,
                      double rel_tolerance) {
  SmacofRun run;
  run.coords = std::move(start);
  double stress = raw_stress(d, run.coords);
  run.stress_trace.push_back(stress);
  if (stress == 0.0) {
    run.converged = true;
    return run;
  }
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd next = guttman_step(d, run.coords);
    const double next_stress = raw_stress(d, next);
    run.coords = std::move(next);
    run.stress_trace.push_back(next_stress);
    run.iterations = it + 1;
    const double previous = stress;
    stress = next_stress;
    if (stress == 0.0 || previous - stress <= rel_tolerance * previous) {
      run.converged = true;
      break;
    }
  }
  return run;
}

std::vector<SmacofRun> smacof_runs(const DissimilarityMatrix& d, const MdsOptions& opts) {
  opts.validate();
  detail::check_dimension(d, opts.p);
  const Eigen::MatrixXd& dv = d.values();
  std::vector<SmacofRun> runs;
  runs.reserve(static_cast<std::size_t>(opts.restarts) + 1);
  runs.push_back(smacof_from(dv, detail::classical_coordinates(dv, opts.p), opts.max_iterations,
                             opts.rel_tolerance));
  for (int r = 0; r < opts.restarts; ++r) {
    runs.push_back(smacof_from(dv, random_start(dv, opts.p, opts.seed, r), opts.max_iterations,
                               opts.rel_tolerance));
  }
  return runs;
}

EmbeddingConfig smacof_mds(const DissimilarityMatrix& d, const MdsOptions& opts) {
  auto runs = smacof_runs(d, opts);
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].final_stress() < runs[best].final_stress()) best = r;
  }
  EmbeddingConfig out;
  out.labels = d.labels();
  out.coords = std::move(runs[best].coords);
  detail::center_columns(out.coords);
  out.stress = runs[best].final_stress();
  return out;
}

}  // namespace pgeo
