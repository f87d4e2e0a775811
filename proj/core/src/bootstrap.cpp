#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "pgeo/alignment.hpp"
#include "pgeo/error.hpp"
#include "pgeo/profiling.hpp"
#include "pgeo/random.hpp"

namespace pgeo {

double percentile(std::vector<double> sample, double q) {
  if (sample.empty()) throw InvariantError("percentile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double h = std::clamp(q, 0.0, 1.0) * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sample.size()) return sample.back();
  const double frac = h - static_cast<double>(lo);
  return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

namespace {

struct Draw {
  double rsa;
  double gpa;
};

// One bootstrap iteration. Redraws reuse the same (seed, layer, b) stream.
std::optional<Draw> draw_once(const DissimilarityMatrix& model, const DissimilarityMatrix& human,
                              const Eigen::MatrixXd& model_map, const Eigen::MatrixXd& human_map,
                              StreamRng& rng, int max_redraws) {
  const std::size_t n = model.size();
  std::vector<std::size_t> idx(n);
  std::vector<char> seen(n);
  std::vector<double> a, b;
  a.reserve(n * (n - 1) / 2);
  b.reserve(n * (n - 1) / 2);
  Eigen::MatrixXd ym(static_cast<Eigen::Index>(n), model_map.cols());
  Eigen::MatrixXd yh(static_cast<Eigen::Index>(n), human_map.cols());

  for (int attempt = 0; attempt <= max_redraws; ++attempt) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t distinct = 0;
    for (auto& i : idx) {
      i = static_cast<std::size_t>(rng.below(n));
      if (!seen[i]) {
        seen[i] = 1;
        ++distinct;
      }
    }
    if (distinct < 3) continue;

    a.clear();
    b.clear();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r + 1; c < n; ++c) {
        a.push_back(model(idx[r], idx[c]));
        b.push_back(human(idx[r], idx[c]));
      }
    }
    const auto rho = spearman(a, b);
    if (!rho) continue;

    for (std::size_t r = 0; r < n; ++r) {
      ym.row(static_cast<Eigen::Index>(r)) = model_map.row(static_cast<Eigen::Index>(idx[r]));
      yh.row(static_cast<Eigen::Index>(r)) = human_map.row(static_cast<Eigen::Index>(idx[r]));
    }
    try {
      return Draw{*rho, procrustes(ym, yh).score};
    } catch (const Error&) {
      continue;  // resampled map collapsed to a point
    }
  }
  return std::nullopt;
}

}  // namespace

BootstrapSamples bootstrap_layer_samples(const DissimilarityMatrix& model, const DissimilarityMatrix& human,
                                         const EmbeddingConfig& model_map, const EmbeddingConfig& human_map,
                                         int layer, const BootstrapOptions& opts) {
  if (opts.iterations < 1) throw Error(Stage::profiling, "bootstrap needs at least 1 iteration");
  if (model.size() != human.size() || model_map.size() != model.size() || human_map.size() != model.size()) {
    throw Error(Stage::profiling, "bootstrap inputs disagree on the stimulus count");
  }
  const auto iterations = static_cast<std::size_t>(opts.iterations);
  std::vector<std::optional<Draw>> draws(iterations);
  detail::parallel_for(iterations, opts.threads, [&](std::size_t it) {
    StreamRng rng{opts.seed, static_cast<std::uint64_t>(layer), static_cast<std::uint64_t>(it)};
    draws[it] = draw_once(model, human, model_map.coords, human_map.coords, rng, opts.max_redraws);
  });

  BootstrapSamples out;
  for (const auto& d : draws) {
    if (!d) {
      ++out.n_degenerate;
      continue;
    }
    out.rsa.push_back(d->rsa);
    out.gpa.push_back(d->gpa);
  }
  return out;
}

BootstrapResult bootstrap(const ActivationTensor& tensor, const DissimilarityMatrix& human,
                          const LayerProfile& profile, const BootstrapOptions& opts) {
  if (opts.iterations < 1) throw Error(Stage::profiling, "bootstrap needs at least 1 iteration");
  if (!(opts.confidence > 0.0 && opts.confidence < 1.0)) {
    throw Error(Stage::profiling, "bootstrap confidence must lie in (0, 1)");
  }
  if (profile.per_layer.size() != tensor.num_layers() ||
      profile.layer_embeddings.size() != tensor.num_layers()) {
    throw Error(Stage::profiling, "profile does not match the activation tensor's layer count");
  }
  if (profile.human_embedding.labels != human.labels() || tensor.labels() != human.labels()) {
    throw Error(Stage::profiling, "profile, tensor and baseline labels disagree");
  }

  BootstrapResult out;
  out.iterations = opts.iterations;
  out.confidence = opts.confidence;
  out.seed = opts.seed;
  const double q_lo = (1.0 - opts.confidence) / 2.0;
  const double q_hi = (1.0 + opts.confidence) / 2.0;

  for (std::size_t l = 0; l < tensor.num_layers(); ++l) {
    const int layer = static_cast<int>(l);
    try {
      const auto model = cosine_dissimilarity(tensor.layer_as_double(l), tensor.labels());
      const auto samples = bootstrap_layer_samples(model, human, profile.layer_embeddings[l],
                                                   profile.human_embedding, layer, opts);
      if (samples.rsa.empty()) {
        throw Error(Stage::profiling, "all " + std::to_string(opts.iterations) +
                                          " bootstrap iterations were degenerate");
      }
      BootstrapLayer row;
      row.layer = layer;
      row.rsa_point = profile.per_layer[l].rsa;
      row.gpa_point = profile.per_layer[l].gpa;
      row.rsa_lo = percentile(samples.rsa, q_lo);
      row.rsa_hi = percentile(samples.rsa, q_hi);
      row.gpa_lo = percentile(samples.gpa, q_lo);
      row.gpa_hi = percentile(samples.gpa, q_hi);
      row.n_degenerate = samples.n_degenerate;
      out.per_layer.push_back(row);
    } catch (const Error& e) {
      throw e.at_layer(layer);
    }
  }
  return out;
}

}  // namespace pgeo
