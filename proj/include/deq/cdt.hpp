#pragma once

// Constrained Delaunay triangulation of a planar point set.

#include "deq/mesh.hpp"

#include <array>
#include <vector>

namespace deq {

struct CdtResult {
    /// Counter-clockwise triangles over the input point indices.
    std::vector<Face> triangles;
    /// Nesting depth of each triangle: the number of constraint edges that
    /// must be crossed to reach it from outside the convex hull.
    std::vector<int> depth;
};

/// Triangulates `points` so that every segment in `segments` appears as a
/// union of edges. Input points lying on a segment split it. Throws
/// GeometryError for duplicate or non-finite points, fewer than three points,
/// all-collinear input, or intersecting segments.
CdtResult constrained_delaunay(const std::vector<Vec2>& points, const std::vector<std::array<int, 2>>& segments);

/// Triangles of `r` whose depth equals `depth`.
std::vector<Face> triangles_at_depth(const CdtResult& r, int depth);

} // namespace deq
