#include "pgeo/activation_dump.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "pgeo/error.hpp"

namespace pgeo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

std::vector<char> encode_f32le(const LayerMatrix& m) {
  std::vector<char> bytes(static_cast<std::size_t>(m.size()) * 4);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    auto bits = std::bit_cast<std::uint32_t>(m.data()[k]);
    for (int b = 0; b < 4; ++b) bytes[4 * k + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  return bytes;
}

LayerMatrix decode_f32le(const std::vector<char>& bytes, Eigen::Index rows, Eigen::Index cols) {
  LayerMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * k + b])) << (8 * b);
    }
    m.data()[k] = std::bit_cast<float>(bits);
  }
  return m;
}

[[noreturn]] void fail(const std::string& what) { throw Error(Stage::ingest, what); }

template <typename T>
T field(const json& manifest, const char* key) {
  if (!manifest.contains(key)) fail(std::string("manifest missing field '") + key + "'");
  try {
    return manifest.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("manifest field '") + key + "' has the wrong type");
  }
}

}  // namespace

fs::path layer_file_name(std::size_t layer) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "layer_%03zu.bin", layer);
  return buf;
}

void write_activation_dump(const ActivationTensor& tensor, const fs::path& dir) {

  json manifest = {
      {"format", kActivationFormat},
      {"model_id", tensor.model_id()},
      {"labels", tensor.labels()},
      {"modality", std::string(to_string(tensor.stimuli().modality()))},
      {"num_layers", tensor.num_layers()},
      {"hidden_dim", tensor.hidden_dim()},
      {"dtype", "f32le"},
      {"order", "row-major"},
  };
  if (tensor.stimuli().prompts()) manifest["prompts"] = *tensor.stimuli().prompts();

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail("cannot create dump directory " + dir.string() + ": " + ec.message());

  for (std::size_t l = 0; l < tensor.num_layers(); ++l) {
    const auto bytes = encode_f32le(tensor.layer(l));
    const auto path = dir / layer_file_name(l);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail("cannot write " + path.string());
  }
  const auto manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) fail("cannot write " + manifest_path.string());
}

ActivationTensor read_activation_dump(const fs::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) fail("cannot open " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    fail("corrupt manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object()) fail("corrupt manifest: not a JSON object");

  if (field<std::string>(manifest, "format") != kActivationFormat) {
    fail("manifest format is not " + std::string(kActivationFormat));
  }
  if (manifest.contains("dtype") && manifest["dtype"] != "f32le") fail("unsupported dtype in manifest");
  if (manifest.contains("order") && manifest["order"] != "row-major") fail("unsupported order in manifest");

  auto labels = field<std::vector<std::string>>(manifest, "labels");
  std::optional<std::vector<std::string>> prompts;
  if (manifest.contains("prompts") && !manifest["prompts"].is_null()) {
    prompts = field<std::vector<std::string>>(manifest, "prompts");
  }
  const auto modality = manifest.contains("modality")
                            ? parse_modality(field<std::string>(manifest, "modality"))
                            : Modality::other;
  const auto num_layers = field<std::int64_t>(manifest, "num_layers");
  const auto hidden_dim = field<std::int64_t>(manifest, "hidden_dim");
  if (num_layers < 1) fail("manifest num_layers must be >= 1");
  if (hidden_dim < 1) fail("manifest hidden_dim must be >= 1");

  StimulusSet stimuli(std::move(labels), modality, std::move(prompts));
  const auto n = static_cast<Eigen::Index>(stimuli.size());
  const auto expected = static_cast<std::uintmax_t>(n) * static_cast<std::uintmax_t>(hidden_dim) * 4;

  std::vector<LayerMatrix> layers;
  layers.reserve(static_cast<std::size_t>(num_layers));
  for (std::int64_t l = 0; l < num_layers; ++l) {
    const auto path = dir / layer_file_name(static_cast<std::size_t>(l));
    std::error_code ec;
    const auto size = fs::file_size(path, ec);
    if (ec) fail("layer " + std::to_string(l) + ": cannot stat " + path.string());
    if (size != expected) {
      fail("layer " + std::to_string(l) + ": " + path.filename().string() + " holds " +
           std::to_string(size) + " bytes, expected " + std::to_string(expected) + " (" +
           std::to_string(n) + "x" + std::to_string(hidden_dim) + " float32)");
    }
    std::ifstream file(path, std::ios::binary);
    std::vector<char> bytes(static_cast<std::size_t>(expected));
    file.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) fail("layer " + std::to_string(l) + ": short read from " + path.string());
    layers.push_back(decode_f32le(bytes, n, hidden_dim));
  }
  return ActivationTensor(std::move(stimuli), field<std::string>(manifest, "model_id"), std::move(layers));
}

}  // namespace pgeo
