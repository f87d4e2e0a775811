// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles/procrustes_oracle.hpp"
#include "oracles/rank_oracle.hpp"
#include "pgeo/activation_dump.hpp"
#include "pgeo/alignment.hpp"
#include "pgeo/baseline_io.hpp"
#include "pgeo/geometry.hpp"
#include "pgeo/profile_io.hpp"
#include "pgeo/profiling.hpp"
#include "pgeo_tools/commands.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace pgeo;
using namespace pgeo::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("pgeo_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

EmbeddingConfig config_of(const Eigen::MatrixXd& coords) {
  return {make_labels(static_cast<std::size_t>(coords.rows())), coords, std::nullopt, std::nullopt};
}

Eigen::MatrixXd rotation2(double theta) {
  Eigen::MatrixXd q(2, 2);
  q << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return q;
}

Eigen::MatrixXd random_orthogonal(int p, StreamRng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(p, p, rng));
  return qr.householderQ();
}

Outcome spearman_oracle() {
  Outcome o;
  StreamRng rng{1};
  double worst = 0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 200; ++trial) {
    const bool ties = trial % 4 == 0;
    const auto a = as_dissimilarity(random_dissimilarity(8, rng, ties));
    const auto b = as_dissimilarity(random_dissimilarity(8, rng, ties));
    const auto got = rsa(a, b);
    const auto want = oracle::brute_force_spearman(a.upper_triangle(), b.upper_triangle());
    o.require(got.rho.has_value() == want.has_value(), "definedness differs at trial " + std::to_string(trial));
    if (got.rho && want) worst = std::max(worst, std::abs(*got.rho - *want));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-12, "max deviation " + fmt(worst));
  o.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max deviation " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome procrustes_oracle() {
  Outcome o;
  StreamRng rng{2};
  double worst = 0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd a = gaussian_matrix(5, 2, rng);
    const Eigen::MatrixXd b = gaussian_matrix(5, 2, rng);
    std::vector<oracle::Point2> pa, pb;
    for (int i = 0; i < 5; ++i) {
      pa.push_back({a(i, 0), a(i, 1)});
      pb.push_back({b(i, 0), b(i, 1)});
    }
    const double got = gpa(config_of(a), config_of(b)).score;
    worst = std::max(worst, std::abs(got - oracle::grid_search_score(pa, pb)));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-5, "max deviation " + fmt(worst));
  o.require(elapsed < 10.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max deviation " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome gpa_invariance() {
  Outcome o;
  StreamRng rng{3};
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    const int n = 8;
    const Eigen::MatrixXd x = gaussian_matrix(n, p, rng);
    const Eigen::MatrixXd y = gaussian_matrix(n, p, rng);
    const double base = gpa(config_of(x), config_of(y)).score;

    Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(p, p);
    reflect(0, 0) = -1;
    const Eigen::RowVectorXd shift = 10.0 * gaussian_matrix(1, p, rng);
    const Eigen::MatrixXd q = random_orthogonal(p, rng);
    const std::vector<std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>> transforms{
        [&](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(m.rowwise() + shift); },
        [](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(37.5 * m); },
        [](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(1e-3 * m); },
        [&](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(m * q); },
        [&](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(m * reflect); },
        [&](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(((2.5 * m * q * reflect).rowwise() + shift)); },
    };
    for (const auto& t : transforms) {
      worst = std::max(worst, std::abs(gpa(config_of(t(x)), config_of(y)).score - base));
      worst = std::max(worst, std::abs(gpa(config_of(x), config_of(t(y))).score - base));
      worst = std::max(worst, std::abs(gpa(config_of(y), config_of(t(y))).score - 1.0));
    }
  }
  o.require(worst < 1e-9, "max change " + fmt(worst));
  if (o.pass) o.detail = "max change " + fmt(worst);
  return o;
}

Outcome smacof_descent() {
  Outcome o;
  StreamRng rng{4};
  double worst_rise = 0;
  double worst_fixed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = as_dissimilarity(random_dissimilarity(15, rng));
    MdsOptions opts;
    opts.restarts = 2;
    opts.seed = static_cast<std::uint64_t>(trial);
    opts.rel_tolerance = 1e-10;
    for (const auto& run : smacof_runs(d, opts)) {
      for (std::size_t i = 1; i < run.stress_trace.size(); ++i)
        worst_rise = std::max(worst_rise, run.stress_trace[i] - run.stress_trace[i - 1]);
    }

    Eigen::MatrixXd pts = gaussian_matrix(15, 2, rng);
    pts = pts.rowwise() - pts.colwise().mean();
    const auto fixed = smacof_from(euclidean_distances(pts), pts, 50, 0.0);
    worst_fixed = std::max(worst_fixed, fixed.final_stress());
    worst_fixed = std::max(worst_fixed, (fixed.coords - pts).cwiseAbs().maxCoeff());
  }
  o.require(worst_rise <= 1e-12, "stress rose by " + fmt(worst_rise));
  o.require(worst_fixed <= 1e-12, "fixed point drifted by " + fmt(worst_fixed));
  if (o.pass) o.detail = "max rise " + fmt(worst_rise) + ", fixed-point drift " + fmt(worst_fixed);
  return o;
}

Outcome circle_recovery() {
  Outcome o;
  const auto d = as_dissimilarity(circle_chords(12));
  const auto y = smacof_mds(d, {});
  const double score = gpa(y, config_of(circle_points(12))).score;
  o.require(y.stress && *y.stress <= 1e-10, "stress " + fmt(y.stress.value_or(-1)));
  o.require(score >= 0.999, "GPA " + fmt(score));
  if (o.pass) o.detail = "stress " + fmt(*y.stress) + ", GPA " + fmt(score);
  return o;
}

Outcome isomap_arc() {
  Outcome o;
  const auto d = as_dissimilarity(euclidean_distances(arc_points(20)));
  IsomapOptions opts;
  opts.k = 2;
  const auto y = isomap(d, opts);
  std::vector<double> first(20), index(20);
  for (int i = 0; i < 20; ++i) {
    first[i] = y.coords(i, 0);
    index[i] = i;
  }
  const auto rho = spearman(first, index);
  o.require(rho && std::abs(*rho) == 1.0, "|Spearman| " + fmt(rho ? std::abs(*rho) : -1));

  opts.k = 19;
  const double gap = (isomap(d, opts).coords - classical_mds(d, 2).coords).cwiseAbs().maxCoeff();
  o.require(gap <= 1e-9, "complete-graph gap " + fmt(gap));
  if (o.pass) o.detail = "|Spearman| 1, complete-graph gap " + fmt(gap);
  return o;
}

ActivationTensor emergence_tensor(int n, std::uint64_t seed) {
  StreamRng rng{seed};
  const int dim = 64;
  const Eigen::MatrixXd ring = ring_vectors(n);
  const Eigen::MatrixXd structure = ring * random_orthonormal_rows(3, dim, rng);
  std::vector<LayerMatrix> layers{
      to_layer(gaussian_matrix(n, dim, rng)),
      to_layer(structure + 0.3 * gaussian_matrix(n, dim, rng)),
      to_layer(structure),
      to_layer(structure + 0.1 * gaussian_matrix(n, dim, rng)),
  };
  return {StimulusSet(make_labels(static_cast<std::size_t>(n)), Modality::color), "synthetic", std::move(layers)};
}

DissimilarityMatrix ring_baseline(int n) { return as_dissimilarity(reference_cosine(ring_vectors(n))); }

Outcome bootstrap_contract() {
  Outcome o;
  const int n = 30;
  const auto tensor = emergence_tensor(n, 7);
  const auto human = ring_baseline(n);
  ProfileOptions popts;
  popts.mds.seed = 11;
  const auto prof = profile(tensor, human, popts);

  BootstrapOptions bopts;
  bopts.seed = 11;
  const auto t0 = Clock::now();
  const auto serial = bootstrap(tensor, human, prof, bopts);
  const double per_layer = seconds_since(t0) / static_cast<double>(tensor.num_layers());
  o.require(per_layer < 5.0, "per-layer time " + fmt(per_layer) + " s");

  const auto again = bootstrap(tensor, human, prof, bopts);
  bopts.threads = 4;
  const auto threaded = bootstrap(tensor, human, prof, bopts);
  const auto text = profile_to_json({prof, serial});
  o.require(text == profile_to_json({prof, again}), "rerun differs");
  o.require(text == profile_to_json({prof, threaded}), "thread count changes output");

  // Model equal to the baseline.
  const Eigen::MatrixXd ring = ring_vectors(n);
  const ActivationTensor same(StimulusSet(make_labels(n), Modality::color), "same", {to_layer(ring)});
  const auto exact = cosine_dissimilarity(same.layer_as_double(0), same.labels());
  bopts.threads = 1;
  const auto same_prof = profile(same, exact, popts);
  const auto degenerate = bootstrap(same, exact, same_prof, bopts).per_layer.at(0);
  o.require(degenerate.rsa_lo == 1.0 && degenerate.rsa_hi == 1.0,
            "identical matrices give [" + fmt(degenerate.rsa_lo) + ", " + fmt(degenerate.rsa_hi) + "]");
  if (o.pass) o.detail = fmt(per_layer) + " s per layer, identical across runs and threads, [1, 1] interval";
  return o;
}

float random_float(StreamRng& rng) {
  // Signed values over a wide exponent range, including subnormals.
  const double mag = std::ldexp(rng.uniform() + 0.5, static_cast<int>(rng.below(260)) - 140);
  return static_cast<float>(rng.below(2) ? mag : -mag);
}

Outcome format_round_trips() {
  Outcome o;
  StreamRng rng{8};
  const auto dir = scratch("formats");

  for (int trial = 0; trial < 10; ++trial) {
    const auto n = 3 + rng.below(10);
    const auto d = 1 + rng.below(40);
    const auto layers = 1 + rng.below(5);
    std::vector<LayerMatrix> mats;
    for (std::uint64_t l = 0; l < layers; ++l) {
      LayerMatrix m(n, d);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = random_float(rng);
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, 0) = 1.0f + static_cast<float>(r);
      mats.push_back(std::move(m));
    }
    const ActivationTensor t(StimulusSet(make_labels(n, "w"), Modality::pitch), "model-" + std::to_string(trial),
                             std::move(mats));
    const auto path = dir / ("dump" + std::to_string(trial));
    write_activation_dump(t, path);
    const auto back = read_activation_dump(path);
    bool bits = back.num_layers() == t.num_layers() && back.labels() == t.labels() && back.model_id() == t.model_id();
    for (std::size_t l = 0; bits && l < t.num_layers(); ++l) {
      bits = back.layer(l).rows() == t.layer(l).rows() && back.layer(l).cols() == t.layer(l).cols() &&
             std::memcmp(back.layer(l).data(), t.layer(l).data(), sizeof(float) * t.layer(l).size()) == 0;
    }
    o.require(bits, "ACTV1 trial " + std::to_string(trial) + " not bit-exact");
  }

  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = as_dissimilarity(random_dissimilarity(12, rng));
    write_dissimilarity_table(d, dir / "table.csv");
    const auto back = read_human_dissimilarity(dir / "table.csv");
    o.require(back.labels() == d.labels(), "baseline labels differ");
    worst = std::max(worst, (back.values() - d.values()).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-9, "baseline deviation " + fmt(worst));

  write_activation_dump(emergence_tensor(10, 9), dir / "analyze_dump");
  write_dissimilarity_table(ring_baseline(10), dir / "human.csv");
  auto analyze = [&](const std::string& out) {
    std::ostringstream sout, serr;
    return cli::run({"pgeo", "analyze", "--dump", (dir / "analyze_dump").string(), "--human",
                     (dir / "human.csv").string(), "--restarts", "3", "--seed", "42", "--bootstrap",
                     "--iterations", "200", "--out", (dir / out).string()},
                    sout, serr);
  };
  o.require(analyze("run1") == 0 && analyze("run2") == 0, "analyze failed");
  o.require(slurp(dir / "run1" / "profile.json") == slurp(dir / "run2" / "profile.json"),
            "profile.json differs between runs");
  if (o.pass) o.detail = "ACTV1 bit-exact, baseline deviation " + fmt(worst) + ", profile.json byte-identical";
  return o;
}

Outcome synthetic_emergence() {
  Outcome o;
  const auto tensor = emergence_tensor(12, 10);
  const auto prof = profile(tensor, ring_baseline(12), {});
  std::string scores;
  for (const auto& s : prof.per_layer) scores += (scores.empty() ? "" : " ") + fmt(s.gpa);
  o.require(prof.peak_layer_gpa == 2, "peak " + std::to_string(prof.peak_layer_gpa) + ", GPA " + scores);
  if (o.pass) o.detail = "peak 2, GPA by layer " + scores;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spearman-oracle", spearman_oracle},
      {"procrustes-oracle", procrustes_oracle},
      {"gpa-similarity-invariance", gpa_invariance},
      {"smacof-monotone-descent", smacof_descent},
      {"circle-recovery", circle_recovery},
      {"isomap-arc-unrolling", isomap_arc},
      {"bootstrap-contract", bootstrap_contract},
      {"format-round-trips", format_round_trips},
      {"synthetic-emergence", synthetic_emergence},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    if (!result.pass) ++failures;
    std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << name << ": " << result.detail << std::endl;
  }
  std::cout << criteria.size() - failures << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
