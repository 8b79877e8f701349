#pragma once

// Procedural test surfaces.

#include "deq/mesh.hpp"

#include <functional>
#include <random>

namespace deq::synthetic {

/// Planar square of cells×cells square cells of the given spacing, each
/// cell split along the same diagonal: (cells+1)² vertices, 2·cells² faces.
TriMesh grid_square(int cells, double spacing = 1.0);

/// Graph of z = height(x, y) over [x0, x1]×[y0, y1] on a cells×cells grid.
TriMesh height_field(int cells, double x0, double x1, double y0, double y1,
                     const std::function<double(double, double)>& height);

/// The classic three-peak test function.
double peaks(double x, double y);

/// peaks over [-3, 3]², scaled by 1/3 in height.
TriMesh peaks_surface(int cells = 45);

/// Gaussian bump z = 0.5·exp(-((x-½)² + (y-½)²)/0.05) over [0, 1]².
TriMesh gaussian_bump(int cells = 32);

/// Star-shaped disk with a randomly perturbed rim and a random smooth height
/// field: one center vertex, `rings` rings of `sectors` vertices.
TriMesh random_disk(std::mt19937_64& rng, int rings = 8, int sectors = 40);

} // namespace deq::synthetic
