#pragma once

#include <filesystem>
#include <iosfwd>

#include "pgeo/stimuli.hpp"

namespace pgeo {

// Human baseline tables are comma-separated UTF-8 text with `.` as decimal
// point. Fields may be double-quoted (RFC 4180 style).
//
// Dissimilarity table:
//   header:  N labels (an optional leading empty corner cell is accepted)
//   rows:    label, d_i1, ..., d_iN   (row labels must follow header order)
//
// Input asymmetry up to 1e-9 is averaged away; larger asymmetry, negative
// entries, a diagonal beyond 1e-9 in magnitude or duplicate labels are errors.
inline constexpr double kBaselineTolerance = 1e-9;

DissimilarityMatrix read_human_dissimilarity(const std::filesystem::path& path);
DissimilarityMatrix parse_human_dissimilarity(std::istream& in);

// Writes the table with an empty corner cell and round-trip (%.17g) values.
void write_dissimilarity_table(const DissimilarityMatrix& d, const std::filesystem::path& path);
void write_dissimilarity_table(const DissimilarityMatrix& d, std::ostream& out);

// VAD table: a header row (names are not interpreted), then one row per
// stimulus: label, valence, arousal, dominance. Errors carry the 1-based line
// number.
VadTable read_vad_table(const std::filesystem::path& path);
VadTable parse_vad_table(std::istream& in);

}  // namespace pgeo
