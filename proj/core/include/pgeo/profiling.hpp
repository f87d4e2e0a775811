#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgeo/geometry.hpp"
#include "pgeo/stimuli.hpp"

namespace pgeo {

enum class EmbeddingMethod { smacof, classical, isomap };

std::string_view to_string(EmbeddingMethod m) noexcept;
EmbeddingMethod parse_embedding_method(std::string_view name);

struct ProfileOptions {
  EmbeddingMethod method = EmbeddingMethod::smacof;
  MdsOptions mds;                 // mds.p is the map dimension for every method
  IsomapOptions isomap;           // isomap.p is overridden by mds.p
  unsigned threads = 1;           // layers run in parallel; output does not depend on this
};

struct LayerScore {
  int layer = 0;
  std::optional<double> rsa;      // empty when undefined (tie-saturated)
  double gpa = 0.0;
  double stress = 0.0;            // raw stress of the layer map
  double stress1 = 0.0;           // normalized stress-1, for reading
};

struct LayerProfile {
  std::string model_id;
  std::string modality;
  int p = 2;
  EmbeddingMethod method = EmbeddingMethod::smacof;
  std::vector<LayerScore> per_layer;
  int peak_layer_gpa = 0;
  std::optional<int> peak_layer_rsa;  // empty only if every layer's RSA is undefined
  EmbeddingConfig human_embedding;
  std::vector<EmbeddingConfig> layer_embeddings;

  // Analysis settings echoed into the output metadata.
  std::uint64_t seed = 0;
  int restarts = 0;
  int max_iterations = 0;
  double rel_tolerance = 0.0;
  std::optional<int> knn;
  bool knn_auto = false;
};

// Runs dissimilarity -> embedding -> RSA/GPA for every layer against the
// human baseline. The human map is computed once with the same method and
// dimension. Errors from inner steps are rethrown annotated with the layer.
LayerProfile profile(const ActivationTensor& tensor, const DissimilarityMatrix& human,
                     const ProfileOptions& opts = {});

// Smallest index attaining the maximum; empty if no value is present.
std::optional<int> peak_index(const std::vector<std::optional<double>>& values);

struct BootstrapLayer {
  int layer = 0;
  std::optional<double> rsa_point;
  double rsa_lo = 0.0;
  double rsa_hi = 0.0;
  double gpa_point = 0.0;
  double gpa_lo = 0.0;
  double gpa_hi = 0.0;
  int n_degenerate = 0;
};

struct BootstrapOptions {
  int iterations = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int max_redraws = 100;
};

struct BootstrapResult {
  int iterations = 0;
  double confidence = 0.0;
  std::uint64_t seed = 0;
  std::vector<BootstrapLayer> per_layer;
};

// Per-iteration resampled scores for one layer, before percentile reduction.
struct BootstrapSamples {
  std::vector<double> rsa;
  std::vector<double> gpa;
  int n_degenerate = 0;
};

// Percentile bootstrap by resampling stimuli with replacement. Iteration b
// of layer l draws from a stream keyed by (seed, l, b) only. RSA is
// recomputed on the resampled model/human dissimilarity submatrices; GPA on
// the resampled rows of the profile's layer and human embeddings. Draws with
// fewer than 3 distinct stimuli, undefined RSA or a collapsed map are redrawn
// up to max_redraws times, then counted as degenerate and dropped.
BootstrapResult bootstrap(const ActivationTensor& tensor, const DissimilarityMatrix& human,
                          const LayerProfile& profile, const BootstrapOptions& opts = {});

BootstrapSamples bootstrap_layer_samples(const DissimilarityMatrix& model,
                                         const DissimilarityMatrix& human,
                                         const EmbeddingConfig& model_map,
                                         const EmbeddingConfig& human_map, int layer,
                                         const BootstrapOptions& opts);

// Linear interpolation between order statistics (the numpy default):
// position q * (n - 1) in the sorted sample. q in [0, 1].
double percentile(std::vector<double> sample, double q);

}  // namespace pgeo
