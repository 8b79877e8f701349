#pragma once

// Sea construction: the flattened land is shrunk into the unit disk, the gap
// up to the circle is triangulated, the disk is glued to its image under
// z -> 1/conj(z), and the result is truncated and scaled back.
//
// Index conventions for every map produced here: land vertices keep their
// indices 0..n_land-1 and land faces come first in their original order.

#include "deq/density.hpp"
#include "deq/mesh.hpp"

#include <cstdint>
#include <vector>

namespace deq {

struct SeaConfig {
    /// Max land radius after normalization.
    double shrink_radius = 0.7;
    /// Vertices farther than this from the origin (normalized units) are removed.
    double truncate_radius = 5.0;
    /// Gap-point spacing in normalized units; 0 selects the mean land edge
    /// length, capped at 2π/16.
    double gap_spacing = 0.0;
    /// Seed for the jitter applied when the first triangulation attempt fails.
    std::uint64_t seed = 0;

    /// Throws ConfigError unless 0 < shrink_radius < 1 < truncate_radius and
    /// gap_spacing >= 0.
    void validate() const;
};

struct NormalizedLand {
    PlanarMap map;
    /// Factor applied after centering.
    double land_scale = 1.0;
    /// Area-weighted land centroid before normalization.
    Vec2 center = Vec2::Zero();
};

/// Translates the land centroid to the origin and scales so the largest vertex
/// radius equals shrink_radius.
NormalizedLand normalize_into_disk(const PlanarMap& land, const SeaConfig& cfg);

struct GapPoints {
    std::vector<Vec2> interior;
    /// Equally spaced points on the unit circle, counter-clockwise from angle 0.
    std::vector<Vec2> ring;
};

/// Hexagonal lattice of the given spacing clipped to |z| <= 1 - l/2, minus
/// points inside the land or within l/2 of its boundary, plus ceil(2π/l)
/// points on the unit circle. Throws ConfigError for fewer than 8 ring points.
GapPoints generate_gap_points(const PlanarMap& normalized_land, double spacing);

struct DiskTriangulation {
    PlanarMap map;
    std::vector<int> ring;
};

/// Land faces plus a constrained Delaunay triangulation of the region between
/// the land boundary and the ring polygon. Vertex order: land, gap points,
/// ring. On triangulation failure the gap points are jittered once (by
/// `seed`) and the triangulation retried.
DiskTriangulation triangulate_gap(const PlanarMap& normalized_land, const GapPoints& gap, std::uint64_t seed = 0);

struct GluedMap {
    PlanarMap map;
    std::vector<int> ring;
    /// For each vertex: its mirror source, or -1 for vertices of the disk.
    std::vector<int> mirror_source;
};

/// Appends the image of the disk under z -> 1/conj(z). Ring vertices are
/// shared; vertices with |z| < 1e-6 are not mirrored and mirror faces touching
/// them are dropped. Mirror faces use reversed index order and are sea; a
/// mirror face is clockwise exactly when the circumcircle of its source
/// contains the origin.
GluedMap reflect_glue(const DiskTriangulation& disk);

struct AugmentedMap {
    PlanarMap map;
    double land_scale = 1.0;
    Vec2 center = Vec2::Zero();
    std::vector<int> circle_ring;
    int land_vertex_count = 0;
    int land_face_count = 0;

    /// Position in the normalized frame used during construction.
    Vec2 to_normalized(const Vec2& p) const { return (p - center) * land_scale; }
};

/// Removes the vertices beyond truncate_radius together with the mirrored
/// vertices of clockwise mirror faces (and all their faces), trims any
/// pinched or detached pieces so the result is a disk, and maps back to the
/// original frame. Land coordinates are copied from `land` unchanged.
AugmentedMap truncate_and_rescale(const GluedMap& glued, const PlanarMap& land, const NormalizedLand& norm,
                                  const SeaConfig& cfg);

/// Full construction from a land-only planar map.
AugmentedMap build_sea(const PlanarMap& land, const SeaConfig& cfg = {});

/// Per-face density on the augmented map: land faces take `rho_f_land`, sea
/// faces the unweighted mean of it (area-weighted by current land face areas
/// when `area_weighted`). rho_v = m_fv·rho_f. Throws DensityError on
/// non-positive or non-finite values.
DensityField extend_density(const AugmentedMap& aug, const Eigen::VectorXd& rho_f_land, bool area_weighted = false);

} // namespace deq
