#pragma once

#include <filesystem>

#include "pgeo/stimuli.hpp"

namespace pgeo {

// ACTV1 layout: <dir>/manifest.json plus <dir>/layer_000.bin ... one file per
// layer, each N*d IEEE-754 float32 values, little-endian, row-major (row i is
// stimulus i). Layer indices are zero-padded to three digits.
inline constexpr const char* kActivationFormat = "ACTV1";

// Creates the directory if needed. Validation happens before any file is
// touched, so a bad tensor leaves the filesystem unchanged.
void write_activation_dump(const ActivationTensor& tensor, const std::filesystem::path& dir);

// Throws Error(Stage::ingest) on a missing or malformed manifest, a layer file
// whose size disagrees with the manifest, or payloads that break the tensor
// invariants (non-finite values, zero-norm rows).
ActivationTensor read_activation_dump(const std::filesystem::path& dir);

std::filesystem::path layer_file_name(std::size_t layer);

}  // namespace pgeo
