#include "pgeo/stimuli.hpp"

#include <cmath>
#include <unordered_set>

#include "pgeo/error.hpp"
#include "cosine.hpp"

namespace pgeo {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::geometry: return "geometry";
    case Stage::alignment: return "alignment";
    case Stage::profiling: return "profiling";
    case Stage::plot: return "plot";
  }
  return "unknown";
}

namespace {

std::string decorate(Stage stage, const std::string& what, std::optional<int> layer) {
  std::string out(to_string(stage));
  if (layer) out += " (layer " + std::to_string(*layer) + ")";
  out += ": ";
  out += what;
  return out;
}

}  // namespace

Error::Error(Stage stage, const std::string& what, std::optional<int> layer)
    : std::runtime_error(decorate(stage, what, layer)), stage_(stage), layer_(layer), detail_(what) {}

Error Error::at_layer(int layer) const {
  if (layer_) return *this;
  return Error(stage_, detail_, layer);
}

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::color: return "color";
    case Modality::pitch: return "pitch";
    case Modality::taste: return "taste";
    case Modality::emotion: return "emotion";
    case Modality::other: return "other";
  }
  return "other";
}

Modality parse_modality(std::string_view name) {
  for (auto m : {Modality::color, Modality::pitch, Modality::taste, Modality::emotion, Modality::other}) {
    if (name == to_string(m)) return m;
  }
  throw Error(Stage::ingest, "unknown modality '" + std::string(name) + "'");
}

void require_unique_labels(const std::vector<std::string>& labels, std::string_view what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw Error(Stage::ingest, std::string(what) + ": empty label");
    if (!seen.insert(label).second) {
      throw Error(Stage::ingest, std::string(what) + ": duplicate label '" + label + "'");
    }
  }
}

StimulusSet::StimulusSet(std::vector<std::string> labels, Modality modality,
                         std::optional<std::vector<std::string>> prompts)
    : labels_(std::move(labels)), modality_(modality), prompts_(std::move(prompts)) {
  if (labels_.size() < 3) {
    throw Error(Stage::ingest, "stimulus set needs at least 3 stimuli, got " +
                                   std::to_string(labels_.size()));
  }
  require_unique_labels(labels_, "stimulus set");
  if (prompts_ && prompts_->size() != labels_.size()) {
    throw Error(Stage::ingest, "stimulus set has " + std::to_string(labels_.size()) +
                                   " labels but " + std::to_string(prompts_->size()) + " prompts");
  }
}

ActivationTensor::ActivationTensor(StimulusSet stimuli, std::string model_id,
                                   std::vector<LayerMatrix> layers)
    : stimuli_(std::move(stimuli)), model_id_(std::move(model_id)), layers_(std::move(layers)) {
  if (layers_.empty()) throw Error(Stage::ingest, "activation tensor has no layers");
  hidden_dim_ = static_cast<std::size_t>(layers_.front().cols());
  if (hidden_dim_ == 0) throw Error(Stage::ingest, "activation tensor has hidden_dim 0");
  const auto n = static_cast<Eigen::Index>(stimuli_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& m = layers_[l];
    if (m.rows() != n || m.cols() != static_cast<Eigen::Index>(hidden_dim_)) {
      throw Error(Stage::ingest, "layer " + std::to_string(l) + " is " + std::to_string(m.rows()) +
                                     "x" + std::to_string(m.cols()) + ", expected " +
                                     std::to_string(n) + "x" + std::to_string(hidden_dim_));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      double sq = 0.0;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double v = m(i, j);
        if (!std::isfinite(v)) {
          throw Error(Stage::ingest, "layer " + std::to_string(l) + ": non-finite value for stimulus '" +
                                         stimuli_.labels()[i] + "'");
        }
        sq += v * v;
      }
      if (!(sq > 0.0)) {
        throw Error(Stage::ingest, "layer " + std::to_string(l) + ": zero-norm activation for stimulus '" +
                                       stimuli_.labels()[i] + "'");
      }
    }
  }
}

Eigen::MatrixXd ActivationTensor::layer_as_double(std::size_t l) const {
  return layers_.at(l).cast<double>();
}

bool ActivationTensor::operator==(const ActivationTensor& other) const {
  if (!(stimuli_ == other.stimuli_) || model_id_ != other.model_id_ ||
      hidden_dim_ != other.hidden_dim_ || layers_.size() != other.layers_.size()) {
    return false;
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l] != other.layers_[l]) return false;
  }
  return true;
}

DissimilarityMatrix::DissimilarityMatrix(std::vector<std::string> labels, Eigen::MatrixXd values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n == 0) throw Error(Stage::ingest, "dissimilarity matrix is empty");
  if (values_.rows() != n || values_.cols() != n) {
    throw Error(Stage::ingest, "dissimilarity matrix is " + std::to_string(values_.rows()) + "x" +
                                   std::to_string(values_.cols()) + " for " + std::to_string(n) +
                                   " labels");
  }
  require_unique_labels(labels_, "dissimilarity matrix");
  constexpr double tol = 1e-12;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v)) {
        throw Error(Stage::ingest, "non-finite dissimilarity between '" + labels_[i] + "' and '" +
                                       labels_[j] + "'");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values_(i, i)) > tol) {
      throw Error(Stage::ingest, "non-zero diagonal for '" + labels_[i] + "'");
    }
    values_(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = values_(i, j);
      const double b = values_(j, i);
      if (std::abs(a - b) > tol) {
        throw Error(Stage::ingest, "asymmetric dissimilarity between '" + labels_[i] + "' and '" +
                                       labels_[j] + "'");
      }
      const double avg = 0.5 * (a + b);
      if (avg < 0.0) {
        throw Error(Stage::ingest, "negative dissimilarity between '" + labels_[i] + "' and '" +
                                       labels_[j] + "'");
      }
      values_(i, j) = avg;
      values_(j, i) = avg;
    }
  }
}

std::vector<double> DissimilarityMatrix::upper_triangle() const {
  const auto n = values_.rows();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(values_(i, j));
  }
  return out;
}

DissimilarityMatrix DissimilarityMatrix::permuted(const std::vector<std::size_t>& order) const {
  const auto n = order.size();
  if (n != labels_.size()) throw InvariantError("permutation size mismatch");
  std::vector<std::string> labels(n);
  Eigen::MatrixXd values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = labels_.at(order[i]);
    for (std::size_t j = 0; j < n; ++j) values(i, j) = values_(order[i], order[j]);
  }
  return {std::move(labels), std::move(values)};
}

VadTable::VadTable(std::vector<std::string> labels, Eigen::MatrixX3d coords)
    : labels_(std::move(labels)), coords_(std::move(coords)) {
  if (coords_.rows() != static_cast<Eigen::Index>(labels_.size())) {
    throw Error(Stage::ingest, "VAD table has " + std::to_string(labels_.size()) + " labels but " +
                                   std::to_string(coords_.rows()) + " rows");
  }
  require_unique_labels(labels_, "VAD table");
  for (Eigen::Index i = 0; i < coords_.rows(); ++i) {
    if (!coords_.row(i).allFinite()) {
      throw Error(Stage::ingest, "VAD row for '" + labels_[i] + "' is not finite");
    }
    if (!(coords_.row(i).squaredNorm() > 0.0)) {
      throw Error(Stage::ingest, "VAD row for '" + labels_[i] + "' has zero norm");
    }
  }
}

DissimilarityMatrix vad_to_dissimilarity(const VadTable& table) {
  const Eigen::MatrixXd coords = table.coords();
  return {table.labels(), detail::cosine_distances(coords, table.labels(), Stage::ingest)};
}

}  // namespace pgeo
