#pragma once

// End-to-end pipelines: density-equalizing flattening, area-preserving
// parameterization and remeshing through the inverse map.

#include "deq/diffusion.hpp"
#include "deq/flatten.hpp"
#include "deq/mesh.hpp"
#include "deq/sea.hpp"

#include <map>
#include <vector>

namespace deq {

enum class PopulationMode { uniform, area, per_face, region_scaled };

struct PopulationSpec {
    PopulationMode mode = PopulationMode::area;
    /// per_face: one value per face.
    std::vector<double> values;
    /// region_scaled: one label per face and multipliers per label. Faces
    /// whose label has no rule keep multiplier 1.
    std::vector<int> region_labels;
    std::map<int, double> multipliers;
};

/// Per-face population. area and region_scaled use 3D face areas. Throws
/// DensityError for non-positive entries and ConfigError for size mismatches
/// or rules naming an unknown region.
std::vector<double> resolve_population(const TriMesh& mesh, const PopulationSpec& spec);

struct EqualizeOptions {
    InitKind init = InitKind::tutte;
    bool strict_init = false;
    SeaConfig sea;
    DiffusionConfig diffusion;
    bool sea_density_weighted = false;
};

struct EqualizeResult {
    /// Final land-only map; vertex i is mesh vertex i.
    PlanarMap land;
    /// Initial land map r0 (after area normalization for curved input).
    PlanarMap initial;
    /// Sea-augmented initial map and its final image.
    AugmentedMap augmented;
    PlanarMap augmented_final;
    DiffusionReport report;
    std::vector<double> population;
    bool planar_input = false;
};

/// True when every vertex has the same z (within 1e-12 of the bounding-box
/// diagonal); such meshes are used directly as r0.
bool is_planar_xy(const TriMesh& mesh);

/// Runs the full pipeline. For curved input the initial flattening is scaled
/// so its area equals the surface area.
EqualizeResult density_equalize(const TriMesh& mesh, const PopulationSpec& spec, const EqualizeOptions& opts = {});
EqualizeResult density_equalize(const TriMesh& mesh, const std::vector<double>& population,
                                const EqualizeOptions& opts = {});

struct AreaRatioStats {
    /// Per land face: initial 3D area / final planar area.
    std::vector<double> ratios;
    double median = 0.0;
    double sd_over_mean = 0.0;
};

AreaRatioStats area_ratio_stats(const TriMesh& mesh, const PlanarMap& land);

struct AreaPreservingResult {
    EqualizeResult run;
    AreaRatioStats ratios;
};

AreaPreservingResult area_preserving_parameterize(const TriMesh& mesh, const EqualizeOptions& opts = {});

struct RemeshSpec {
    /// Lattice spacing on the planar map; 0 selects the mean land edge length.
    double spacing = 0.0;
};

/// Samples a hexagonal lattice inside the land polygon (plus the boundary
/// vertices), triangulates it and lifts every sample to 3D by barycentric
/// interpolation in its containing land face.
TriMesh remesh_surface(const TriMesh& mesh, const PlanarMap& land, const RemeshSpec& spec = {});

} // namespace deq
