#pragma once

// Backward-Euler density diffusion with vertex advection.

#include "deq/density.hpp"
#include "deq/mesh.hpp"
#include "deq/sea.hpp"

#include <string>
#include <vector>

namespace deq {

enum class VelocityMode {
    fick,        ///< v = -∇ρ / ρ
    raw_gradient ///< v = +∇ρ
};

std::string to_string(VelocityMode m);
/// Accepts "fick", "raw-gradient" and "raw_gradient".
VelocityMode parse_velocity_mode(const std::string& name);

struct DiffusionConfig {
    double epsilon = 1e-3;
    int max_iterations = 200;
    VelocityMode velocity = VelocityMode::fick;

    void validate() const;
};

struct DiffusionState {
    PlanarMap map;
    DensityField density;
    int iteration = 0;
    double dt = 0.0;
    std::vector<double> trace;
};

/// min{min ρ / mean ρ, mean ρ / max ρ} · area, means unweighted over faces.
double compute_timestep(const Eigen::VectorXd& rho_f0, double total_area);

/// One iteration: reassemble the Laplacian on the current map, solve
/// (D - dt L) ρ_n = D ρ_{n-1}, move every vertex by dt·v and record the
/// stopping functional of the new face density. Throws DensityError when the
/// solve produces a non-positive vertex density.
DiffusionState diffusion_step(const DiffusionState& state, VelocityMode mode = VelocityMode::fick);

struct DiffusionReport {
    int iterations = 0;
    double dt = 0.0;
    std::vector<double> trace;
    double initial_functional = 0.0;
    bool converged = false;
    /// Coordinates were mapped p -> center + factor·(p - center) after the loop.
    double rescale_factor = 1.0;
    Vec2 rescale_center = Vec2::Zero();
    /// Final land density (population / area), normalized by its overall mean.
    std::vector<double> land_density;
    double land_median = 0.0;
    double land_iqr = 0.0;
    double land_sd_over_mean = 0.0;
    int flipped_land_faces = 0;
};

struct DiffusionResult {
    /// Augmented map (land and sea) after the final rescale.
    PlanarMap map;
    DiffusionReport report;
};

/// Iterates until the stopping functional drops below epsilon or the cap is
/// reached, then rescales so the land area matches its initial value. A cap
/// hit is reported through `converged` with a warning.
DiffusionResult run_to_convergence(const AugmentedMap& aug, const DensityField& density,
                                   const DiffusionConfig& cfg = {});

/// Normalized land density for a given per-land-face population.
std::vector<double> normalized_land_density(const PlanarMap& map, std::span<const double> land_population);

} // namespace deq
