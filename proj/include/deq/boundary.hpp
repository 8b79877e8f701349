#pragma once

// Curvature-based flattening of a 3D boundary loop onto a convex plane curve.

#include "deq/mesh.hpp"

#include <vector>

namespace deq {

/// Planar image of a boundary loop. One point per boundary vertex, in loop
/// order; the closing edge runs from the last point back to the first.
struct FlatCurve {
    std::vector<Vec2> points;
    /// Rescaled per-vertex turning angles; they sum to 2π.
    std::vector<double> target_curvature;
    /// |φ(l) - φ(0)| of the unadjusted polygon.
    double closure_gap = 0.0;
    /// |Φ(l) - Φ(0)| after the closure adjustment (zero up to rounding).
    double endpoint_residual = 0.0;
    double total_length = 0.0;
};

/// Unsigned turning angle at each vertex, in [0, π): the angle between the
/// incoming and outgoing unit tangents. Throws GeometryError for fewer than 3
/// vertices, zero-length edges, or a fold-back corner (angle within 1e-12 of π).
std::vector<double> discrete_curvature(const BoundaryCurve& curve);

/// Builds the closed convex curve with the same edge lengths whose turning
/// angles are the rescaled curvatures. Warns when the closure gap exceeds
/// a tenth of the total length.
FlatCurve flatten_boundary(const BoundaryCurve& curve);

struct ConvexityReport {
    bool convex = false;
    bool simple = false;
    int turning_number = 0;
};

ConvexityReport verify_convex_simple(const std::vector<Vec2>& polygon);
inline ConvexityReport verify_convex_simple(const FlatCurve& flat) { return verify_convex_simple(flat.points); }

/// Builds a BoundaryCurve from an explicit closed point sequence (no mesh).
BoundaryCurve make_boundary_curve(std::vector<Vec3> points);

} // namespace deq
