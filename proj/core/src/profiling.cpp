#include "pgeo/profiling.hpp"

#include "parallel.hpp"
#include "pgeo/alignment.hpp"
#include "pgeo/error.hpp"

namespace pgeo {

std::string_view to_string(EmbeddingMethod m) noexcept {
  switch (m) {
    case EmbeddingMethod::smacof: return "smacof";
    case EmbeddingMethod::classical: return "classical";
    case EmbeddingMethod::isomap: return "isomap";
  }
  return "smacof";
}

EmbeddingMethod parse_embedding_method(std::string_view name) {
  for (auto m : {EmbeddingMethod::smacof, EmbeddingMethod::classical, EmbeddingMethod::isomap}) {
    if (name == to_string(m)) return m;
  }
  throw Error(Stage::geometry, "unknown embedding method '" + std::string(name) + "'");
}

std::optional<int> peak_index(const std::vector<std::optional<double>>& values) {
  std::optional<int> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    if (!best || *values[i] > *values[static_cast<std::size_t>(*best)]) best = static_cast<int>(i);
  }
  return best;
}

namespace {

EmbeddingConfig embed(const DissimilarityMatrix& d, const ProfileOptions& opts) {
  switch (opts.method) {
    case EmbeddingMethod::smacof: return smacof_mds(d, opts.mds);
    case EmbeddingMethod::classical: return classical_mds(d, opts.mds.p);
    case EmbeddingMethod::isomap: {
      IsomapOptions iso = opts.isomap;
      iso.p = opts.mds.p;
      return isomap(d, iso);
    }
  }
  throw InvariantError("unhandled embedding method");
}

}  // namespace

LayerProfile profile(const ActivationTensor& tensor, const DissimilarityMatrix& human,
                     const ProfileOptions& opts) {
  opts.mds.validate();
  const auto& labels = tensor.labels();
  if (labels.size() != human.size()) {
    throw Error(Stage::ingest, "dump has " + std::to_string(labels.size()) + " stimuli, baseline has " +
                                   std::to_string(human.size()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != human.labels()[i]) {
      throw Error(Stage::ingest, "label mismatch at position " + std::to_string(i) + ": dump has '" +
                                     labels[i] + "', baseline has '" + human.labels()[i] + "'");
    }
  }
  if (labels.size() < 4) {
    throw Error(Stage::profiling, "profiling needs at least 4 stimuli, got " + std::to_string(labels.size()));
  }

  LayerProfile out;
  out.model_id = tensor.model_id();
  out.modality = std::string(to_string(tensor.stimuli().modality()));
  out.p = opts.mds.p;
  out.method = opts.method;
  out.seed = opts.mds.seed;
  out.restarts = opts.mds.restarts;
  out.max_iterations = opts.mds.max_iterations;
  out.rel_tolerance = opts.mds.rel_tolerance;
  if (opts.method == EmbeddingMethod::isomap) {
    out.knn = opts.isomap.resolved_k(labels.size());
    out.knn_auto = opts.isomap.auto_connect;
  }

  try {
    out.human_embedding = embed(human, opts);
  } catch (const Error& e) {
    throw Error(e.stage(), "human baseline: " + e.detail());
  }

  const std::size_t num_layers = tensor.num_layers();
  out.per_layer.resize(num_layers);
  out.layer_embeddings.resize(num_layers);
  detail::parallel_for(num_layers, opts.threads, [&](std::size_t l) {
    const int layer = static_cast<int>(l);
    try {
      const auto d = cosine_dissimilarity(tensor.layer_as_double(l), labels);
      auto y = embed(d, opts);
      LayerScore score;
      score.layer = layer;
      score.rsa = rsa(d, human).rho;
      score.gpa = gpa(y, out.human_embedding).score;
      score.stress = y.stress.value_or(raw_stress(d.values(), y.coords));
      score.stress1 = normalized_stress(d.values(), score.stress);
      out.per_layer[l] = score;
      out.layer_embeddings[l] = std::move(y);
    } catch (const Error& e) {
      throw e.at_layer(layer);
    }
  });

  std::vector<std::optional<double>> gpas, rsas;
  for (const auto& s : out.per_layer) {
    gpas.emplace_back(s.gpa);
    rsas.push_back(s.rsa);
  }
  out.peak_layer_gpa = peak_index(gpas).value_or(0);
  out.peak_layer_rsa = peak_index(rsas);
  return out;
}

}  // namespace pgeo
