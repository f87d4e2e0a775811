#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pgeo {

enum class Modality { color, pitch, taste, emotion, other };

std::string_view to_string(Modality m) noexcept;
// Throws Error(Stage::ingest) on an unknown name.
Modality parse_modality(std::string_view name);

// Ordered stimulus identifiers plus the prompts they were rendered into.
class StimulusSet {
 public:
  // Labels must be unique and non-empty, at least 3 of them; prompts, when
  // given, must match the label count.
  StimulusSet(std::vector<std::string> labels, Modality modality,
              std::optional<std::vector<std::string>> prompts = std::nullopt);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  Modality modality() const noexcept { return modality_; }
  const std::optional<std::vector<std::string>>& prompts() const noexcept { return prompts_; }

  bool operator==(const StimulusSet&) const = default;

 private:
  std::vector<std::string> labels_;
  Modality modality_;
  std::optional<std::vector<std::string>> prompts_;
};

// Row-major so that a layer maps 1:1 onto its on-disk float32 payload.
using LayerMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Last-token hidden states for every stimulus at every layer (0 = embeddings).
class ActivationTensor {
 public:
  // Validates shape, finiteness and strictly positive row norms.
  ActivationTensor(StimulusSet stimuli, std::string model_id, std::vector<LayerMatrix> layers);

  const StimulusSet& stimuli() const noexcept { return stimuli_; }
  const std::vector<std::string>& labels() const noexcept { return stimuli_.labels(); }
  const std::string& model_id() const noexcept { return model_id_; }
  std::size_t num_stimuli() const noexcept { return stimuli_.size(); }
  std::size_t num_layers() const noexcept { return layers_.size(); }
  std::size_t hidden_dim() const noexcept { return hidden_dim_; }

  const LayerMatrix& layer(std::size_t l) const { return layers_.at(l); }
  const std::vector<LayerMatrix>& layers() const noexcept { return layers_; }

  // Layer promoted to double for analysis.
  Eigen::MatrixXd layer_as_double(std::size_t l) const;

  bool operator==(const ActivationTensor& other) const;

 private:
  StimulusSet stimuli_;
  std::string model_id_;
  std::size_t hidden_dim_ = 0;
  std::vector<LayerMatrix> layers_;
};

// Symmetric, zero-diagonal, non-negative, finite N×N matrix with labels.
class DissimilarityMatrix {
 public:
  // Entries whose transpose partner differs by more than 1e-12 are rejected;
  // the stored matrix is the average of values and its transpose. Diagonal
  // entries within 1e-12 of zero are set to exactly 0.
  DissimilarityMatrix(std::vector<std::string> labels, Eigen::MatrixXd values);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

  // Strict upper triangle (i < j), row-major order.
  std::vector<double> upper_triangle() const;

  // Same matrix with rows/columns reordered: result(i, j) = this(order[i], order[j]).
  DissimilarityMatrix permuted(const std::vector<std::size_t>& order) const;

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd values_;
};

// Valence/arousal/dominance ratings, one row per stimulus.
class VadTable {
 public:
  VadTable(std::vector<std::string> labels, Eigen::MatrixX3d coords);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixX3d& coords() const noexcept { return coords_; }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixX3d coords_;
};

// D[i][j] = 1 - cos(v_i, v_j) on the raw (uncentered) VAD coordinates.
DissimilarityMatrix vad_to_dissimilarity(const VadTable& table);

// Throws Error(stage) if labels are empty, duplicated or blank.
void require_unique_labels(const std::vector<std::string>& labels, std::string_view what);

}  // namespace pgeo
