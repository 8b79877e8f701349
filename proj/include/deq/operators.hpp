#pragma once

// Discrete differential operators on planar triangulations.

#include "deq/mesh.hpp"
#include "deq/sparse.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace deq {

/// Cotangent Laplacian split as Δ = D⁻¹ L.
///
/// L is symmetric with L_ij = cot α_ij + cot β_ij on edges (a single cotangent
/// on boundary edges) and L_ii = -Σ_j L_ij, so L·1 = 0. D is diagonal with
/// D_ii = 2 A(i), where A(i) is one third of the incident face area.
struct LaplacianPair {
    SparseMatrix L;
    Eigen::VectorXd mass; ///< diagonal of D

    SparseMatrix D() const;
    /// Δu = D⁻¹ L u.
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
};

/// Areas and angles are unsigned, so flipped faces are tolerated; zero-area
/// faces throw DegenerateFaceError.
LaplacianPair cotan_laplacian(const PlanarMap& map);

/// Row-stochastic face/vertex transfer operators.
struct TransitionSet {
    SparseMatrix m_vf; ///< |F|×|V|, entries 1/3: vertex values to faces
    SparseMatrix m_fv; ///< |V|×|F|, incidence rows divided by their count
    SparseMatrix w_fv; ///< |V|×|F|, incident face areas divided by their sum
};

/// Throws TopologyError when a vertex has no incident face.
TransitionSet transitions(const PlanarMap& map);

/// Per-face gradient of a piecewise-linear vertex field. For every CCW face
/// [i,j,k] the result g satisfies <g, p_j - p_i> = ρ_j - ρ_i and
/// <g, p_k - p_j> = ρ_k - ρ_j.
std::vector<Vec2> face_gradient(const PlanarMap& map, const Eigen::VectorXd& rho_v);

/// Area-weighted conversion of a per-face vector field to the vertices.
std::vector<Vec2> faces_to_vertices(const SparseMatrix& w_fv, std::span<const Vec2> face_values);

} // namespace deq
