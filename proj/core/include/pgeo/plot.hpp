#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pgeo/profile_io.hpp"

namespace pgeo {

// Standalone SVG documents for the two figure kinds.

// Scatter of an embedding with stimulus labels. `layer` selects a layer map;
// -1 selects the human baseline; empty selects the peak-GPA layer. For p = 3
// the first two coordinates are drawn. Throws Error(Stage::plot) on an
// out-of-range layer.
std::string render_map_svg(const ProfileDocument& doc, std::optional<int> layer);

// RSA and GPA versus layer index; shaded percentile bands when the document
// carries bootstrap data.
std::string render_trajectory_svg(const ProfileDocument& doc);

// "#RRGGBB" (or "RRGGBB") -> normalized "#rrggbb"; empty if not a hex color.
std::optional<std::string> parse_hex_color(std::string_view label);

// Fill colour for stimulus `index`: its own hex value for colour stimuli,
// otherwise a fixed categorical palette cycled by label order.
std::string stimulus_color(std::string_view modality, std::string_view label, std::size_t index);

}  // namespace pgeo
