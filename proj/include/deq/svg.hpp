#pragma once

// SVG rendering of the land part of a planar map.

#include "deq/mesh.hpp"

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

namespace deq {

struct SvgOptions {
    bool stroke = true;
    /// Legend caption, e.g. "density".
    std::string label = "density";
};

/// RGB fill for a value on a diverging ramp centered at 1: blue below, white
/// at 1, red above. `spread` is the largest |log value| mapped to full color.
std::string ramp_color(double value, double spread);

/// One polygon per land face filled by `face_values` (indexed by land face in
/// map order), with a min/max legend. The viewBox bounds the land, y points
/// up. Throws GeometryError when the map has no land faces.
void write_svg(std::ostream& out, const PlanarMap& map, std::span<const double> face_values,
               const SvgOptions& opts = {});
void write_svg(const std::filesystem::path& path, const PlanarMap& map, std::span<const double> face_values,
               const SvgOptions& opts = {});

} // namespace deq
