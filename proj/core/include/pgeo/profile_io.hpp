#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pgeo/profiling.hpp"

namespace pgeo {

struct ProfileDocument {
  LayerProfile profile;
  std::optional<BootstrapResult> bootstrap;
};

// JSON text with every LayerProfile field, embeddings as nested coordinate
// arrays (shortest round-trip doubles), a `metadata` block and, when present,
// a `bootstrap` block. Output is a pure function of the document.
std::string profile_to_json(const ProfileDocument& doc);

// Throws Error(Stage::plot) on malformed input.
ProfileDocument profile_from_json(const std::string& text);
ProfileDocument read_profile(const std::filesystem::path& path);

// Writes to `<path>.tmp` and renames over `path`, so readers never observe a
// partially written file.
void write_text_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace pgeo
