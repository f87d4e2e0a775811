#include "pgeo/profile_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pgeo/error.hpp"

namespace pgeo {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kProfileFormat = "pgeo-profile/1";

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json embedding_json(const EmbeddingConfig& y) {
  Json coords = Json::array();
  for (Eigen::Index i = 0; i < y.coords.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < y.coords.cols(); ++c) row.push_back(y.coords(i, c));
    coords.push_back(std::move(row));
  }
  Json out = {{"labels", y.labels}, {"coords", std::move(coords)}, {"stress", optional_number(y.stress)}};
  if (y.neighbors) out["neighbors"] = *y.neighbors;
  return out;
}

[[noreturn]] void fail(const std::string& what) { throw Error(Stage::plot, "profile: " + what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return member(j, key).get<T>();
  } catch (const Json::exception&) {
    fail(std::string("field '") + key + "' has the wrong type");
  }
}

std::optional<double> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<double>(j, key);
}

EmbeddingConfig embedding_from(const Json& j) {
  EmbeddingConfig y;
  y.labels = get<std::vector<std::string>>(j, "labels");
  const auto rows = get<std::vector<std::vector<double>>>(j, "coords");
  if (rows.size() != y.labels.size()) fail("embedding has mismatched labels and coordinates");
  const auto p = rows.empty() ? 0 : rows.front().size();
  y.coords.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != p) fail("ragged embedding coordinates");
    for (std::size_t c = 0; c < p; ++c) y.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  }
  y.stress = get_optional(j, "stress");
  if (j.contains("neighbors")) y.neighbors = get<int>(j, "neighbors");
  return y;
}

}  // namespace

std::string profile_to_json(const ProfileDocument& doc) {
  const auto& p = doc.profile;
  Json per_layer = Json::array();
  for (const auto& s : p.per_layer) {
    per_layer.push_back({{"layer", s.layer},
                         {"rsa", optional_number(s.rsa)},
                         {"gpa", s.gpa},
                         {"stress", s.stress},
                         {"stress1", s.stress1}});
  }
  Json layer_maps = Json::array();
  for (const auto& y : p.layer_embeddings) layer_maps.push_back(embedding_json(y));

  Json metadata = {
      {"method", std::string(to_string(p.method))},
      {"p", p.p},
      {"seed", p.seed},
      {"restarts", p.restarts},
      {"max_iterations", p.max_iterations},
      {"rel_tolerance", p.rel_tolerance},
      {"dissimilarity", "cosine"},
      {"tie_policy", "average-rank"},
      {"human_embedding_policy", "computed once per run with the layer method and dimension"},
      {"bootstrap_embedding_policy", "resample rows of the full-sample layer and human maps"},
  };
  if (p.knn) {
    metadata["knn"] = *p.knn;
    metadata["knn_auto"] = p.knn_auto;
  }

  Json out = {
      {"format", kProfileFormat},
      {"model_id", p.model_id},
      {"modality", p.modality},
      {"p", p.p},
      {"method", std::string(to_string(p.method))},
      {"per_layer", std::move(per_layer)},
      {"peak_layer_gpa", p.peak_layer_gpa},
      {"peak_layer_rsa", p.peak_layer_rsa ? Json(*p.peak_layer_rsa) : Json(nullptr)},
      {"human_embedding", embedding_json(p.human_embedding)},
      {"layer_embeddings", std::move(layer_maps)},
      {"metadata", std::move(metadata)},
  };

  if (doc.bootstrap) {
    const auto& b = *doc.bootstrap;
    Json rows = Json::array();
    for (const auto& r : b.per_layer) {
      rows.push_back({{"layer", r.layer},
                      {"rsa_point", optional_number(r.rsa_point)},
                      {"rsa_lo", r.rsa_lo},
                      {"rsa_hi", r.rsa_hi},
                      {"gpa_point", r.gpa_point},
                      {"gpa_lo", r.gpa_lo},
                      {"gpa_hi", r.gpa_hi},
                      {"n_degenerate", r.n_degenerate}});
    }
    out["bootstrap"] = {{"iterations", b.iterations},
                        {"confidence", b.confidence},
                        {"seed", b.seed},
                        {"method", "percentile"},
                        {"per_layer", std::move(rows)}};
  }
  return out.dump(2) + "\n";
}

ProfileDocument profile_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (get<std::string>(j, "format") != kProfileFormat) fail("unsupported format");

  ProfileDocument doc;
  auto& p = doc.profile;
  p.model_id = get<std::string>(j, "model_id");
  p.modality = get<std::string>(j, "modality");
  p.p = get<int>(j, "p");
  try {
    p.method = parse_embedding_method(get<std::string>(j, "method"));
  } catch (const Error& e) {
    fail(e.detail());
  }
  for (const auto& row : member(j, "per_layer")) {
    LayerScore s;
    s.layer = get<int>(row, "layer");
    s.rsa = get_optional(row, "rsa");
    s.gpa = get<double>(row, "gpa");
    s.stress = get<double>(row, "stress");
    s.stress1 = get<double>(row, "stress1");
    p.per_layer.push_back(s);
  }
  p.peak_layer_gpa = get<int>(j, "peak_layer_gpa");
  if (!member(j, "peak_layer_rsa").is_null()) p.peak_layer_rsa = get<int>(j, "peak_layer_rsa");
  p.human_embedding = embedding_from(member(j, "human_embedding"));
  for (const auto& y : member(j, "layer_embeddings")) p.layer_embeddings.push_back(embedding_from(y));
  if (p.layer_embeddings.size() != p.per_layer.size()) fail("layer_embeddings and per_layer lengths differ");

  const auto& meta = member(j, "metadata");
  p.seed = get<std::uint64_t>(meta, "seed");
  p.restarts = get<int>(meta, "restarts");
  p.max_iterations = get<int>(meta, "max_iterations");
  p.rel_tolerance = get<double>(meta, "rel_tolerance");
  if (meta.contains("knn")) {
    p.knn = get<int>(meta, "knn");
    p.knn_auto = get<bool>(meta, "knn_auto");
  }

  if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    BootstrapResult r;
    r.iterations = get<int>(b, "iterations");
    r.confidence = get<double>(b, "confidence");
    r.seed = get<std::uint64_t>(b, "seed");
    for (const auto& row : member(b, "per_layer")) {
      BootstrapLayer l;
      l.layer = get<int>(row, "layer");
      l.rsa_point = get_optional(row, "rsa_point");
      l.rsa_lo = get<double>(row, "rsa_lo");
      l.rsa_hi = get<double>(row, "rsa_hi");
      l.gpa_point = get<double>(row, "gpa_point");
      l.gpa_lo = get<double>(row, "gpa_lo");
      l.gpa_hi = get<double>(row, "gpa_hi");
      l.n_degenerate = get<int>(row, "n_degenerate");
      r.per_layer.push_back(l);
    }
    doc.bootstrap = std::move(r);
  }
  return doc;
}

ProfileDocument read_profile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return profile_from_json(buf.str());
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Stage::profiling, "cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(Stage::profiling, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(Stage::profiling, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace pgeo
