#pragma once

// Whole-surface flattening with the curvature-based boundary as Dirichlet data.

#include "deq/boundary.hpp"
#include "deq/mesh.hpp"
#include "deq/sparse.hpp"

#include <string>
#include <vector>

namespace deq {

enum class InitKind { tutte, authalic };

std::string to_string(InitKind kind);
/// Accepts "tutte" and "authalic"; throws ConfigError otherwise.
InitKind parse_init_kind(const std::string& name);

/// Linear system of an initial flattening, restricted to the interior rows.
struct FlattenSystem {
    InitKind kind = InitKind::tutte;
    /// Interior-by-interior block of the weight matrix.
    SparseMatrix matrix;
    /// Interior vertex for each system row.
    std::vector<int> interior;
    /// Right-hand sides (x and y columns) after moving the boundary columns over.
    Eigen::MatrixXd rhs;
    /// Boundary vertex positions, indexed by mesh vertex (NaN for interior vertices).
    std::vector<Vec2> boundary_positions;
};

/// Assembles the system for `kind`. Authalic weights are measured on the 3D
/// mesh: for edge [i, j] the angles at x_j in the two incident faces, with
/// cotangents clamped to |cot| <= 1e4.
FlattenSystem build_flatten_system(const TriMesh& mesh, const BoundaryCurve& boundary, const FlatCurve& flat,
                                   InitKind kind);

/// Uniform-weight (Tutte) embedding. Throws GeometryError if any face comes out
/// flipped, which signals a non-convex boundary.
PlanarMap tutte_flatten(const TriMesh& mesh, const FlatCurve& boundary);

struct AuthalicResult {
    PlanarMap map;
    int flipped_faces = 0;
};

/// Locally authalic (Chi energy) embedding. Flips are reported, not fatal.
AuthalicResult authalic_flatten(const TriMesh& mesh, const FlatCurve& boundary);

/// Boundary flattening followed by the selected interior solve. With
/// `strict` an authalic result containing flipped faces is replaced by the
/// Tutte map.
PlanarMap initial_flatten(const TriMesh& mesh, InitKind kind, bool strict = false);

} // namespace deq
