#include "deq/diffusion.hpp"

#include "deq/error.hpp"
#include "deq/log.hpp"
#include "deq/operators.hpp"

#include <algorithm>
#include <cmath>

namespace deq {

std::string to_string(VelocityMode m) { return m == VelocityMode::fick ? "fick" : "raw-gradient"; }

VelocityMode parse_velocity_mode(const std::string& name)
{
    if (name == "fick") return VelocityMode::fick;
    if (name == "raw-gradient" || name == "raw_gradient") return VelocityMode::raw_gradient;
    throw ConfigError("unknown velocity mode '" + name + "' (expected fick or raw-gradient)");
}

void DiffusionConfig::validate() const
{
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (max_iterations < 0) throw ConfigError("max iterations must be non-negative");
}

double compute_timestep(const Eigen::VectorXd& rho_f0, double total_area)
{
    if (rho_f0.size() == 0) throw DensityError("empty density");
    if (!(rho_f0.minCoeff() > 0.0)) throw DensityError("density must be positive");
    const double mean = rho_f0.mean();
    return std::min(rho_f0.minCoeff() / mean, mean / rho_f0.maxCoeff()) * total_area;
}

DiffusionState diffusion_step(const DiffusionState& state, VelocityMode mode)
{
    const PlanarMap& map = state.map;
    const LaplacianPair lap = cotan_laplacian(map);
    const int n = map.vertex_count();

    std::vector<Triplet> trips;
    trips.reserve(lap.L.nonzeros() + n);
    const auto& Ls = lap.L.storage();
    for (int r = 0; r < Ls.outerSize(); ++r)
        for (SparseMatrix::Storage::InnerIterator it(Ls, r); it; ++it)
            trips.push_back({r, static_cast<int>(it.col()), -state.dt * it.value()});
    for (int i = 0; i < n; ++i) trips.push_back({i, i, lap.mass[i]});
    const SparseMatrix system = assemble(trips, n, n);
    const Eigen::VectorXd rhs = lap.mass.cwiseProduct(state.density.rho_v);

    Eigen::VectorXd rho_v;
    try {
        rho_v = solve_spd(system, rhs).x.col(0);
    } catch (const SolverError& e) {
        warn(std::string("SPD diffusion solve failed (") + e.what() + "); using a general solver");
        rho_v = solve_general(system, rhs).x.col(0);
    }
    if (!(rho_v.minCoeff() > 0.0))
        throw DensityError("diffusion produced a non-positive density at iteration " +
                           std::to_string(state.iteration + 1) + "; the input population is too extreme");

    const TransitionSet tr = transitions(map);
    const std::vector<Vec2> grad_f = face_gradient(map, rho_v);
    const std::vector<Vec2> grad_v = faces_to_vertices(tr.w_fv, grad_f);

    std::vector<Vec2> coords = map.coords();
    for (int i = 0; i < n; ++i) {
        const Vec2 v = mode == VelocityMode::fick ? Vec2(-grad_v[i] / rho_v[i]) : grad_v[i];
        coords[i] += state.dt * v;
    }

    DiffusionState next;
    next.map = map.with_coords(std::move(coords));
    next.density.rho_v = std::move(rho_v);
    next.density.rho_f = tr.m_vf * next.density.rho_v;
    next.iteration = state.iteration + 1;
    next.dt = state.dt;
    next.trace = state.trace;
    next.trace.push_back(stopping_functional(next.density.rho_f));

    std::vector<int> flipped;
    for (int f = 0; f < next.map.face_count(); ++f)
        if (next.map.is_land(f) && !(next.map.signed_area(f) > 0.0)) flipped.push_back(f);
    if (!flipped.empty()) {
        std::string list;
        for (std::size_t k = 0; k < flipped.size() && k < 10; ++k) list += (k ? ", " : "") + std::to_string(flipped[k]);
        if (flipped.size() > 10) list += ", ...";
        warn(std::to_string(flipped.size()) + " land faces flipped at iteration " + std::to_string(next.iteration) +
             ": " + list);
    }
    return next;
}

std::vector<double> normalized_land_density(const PlanarMap& map, std::span<const double> land_population)
{
    std::vector<double> out;
    double pop = 0.0, area = 0.0;
    for (int f = 0, k = 0; f < map.face_count(); ++f) {
        if (!map.is_land(f)) continue;
        const double a = map.signed_area(f);
        out.push_back(land_population[k] / a);
        pop += land_population[k];
        area += a;
        ++k;
    }
    const double mean = pop / area;
    for (double& d : out) d /= mean;
    return out;
}

DiffusionResult run_to_convergence(const AugmentedMap& aug, const DensityField& density, const DiffusionConfig& cfg)
{
    cfg.validate();
    const PlanarMap& r0 = aug.map;
    if (density.rho_f.size() != r0.face_count() || density.rho_v.size() != r0.vertex_count())
        throw DensityError("density field does not match the map");

    std::vector<double> population;
    for (int f = 0; f < r0.face_count(); ++f)
        if (r0.is_land(f)) population.push_back(density.rho_f[f] * r0.signed_area(f));
    const double area0 = land_area(r0);

    DiffusionState state;
    state.map = r0;
    state.density = density;
    state.dt = compute_timestep(density.rho_f, area0);

    DiffusionReport report;
    report.dt = state.dt;
    report.initial_functional = stopping_functional(density.rho_f);
    report.converged = report.initial_functional < cfg.epsilon;
    while (!report.converged && state.iteration < cfg.max_iterations) {
        state = diffusion_step(state, cfg.velocity);
        report.converged = state.trace.back() < cfg.epsilon;
    }
    if (!report.converged)
        warn("diffusion did not converge within " + std::to_string(cfg.max_iterations) + " iterations (sd/mean " +
             std::to_string(state.trace.empty() ? report.initial_functional : state.trace.back()) + ")");
    report.iterations = state.iteration;
    report.trace = state.trace;

    report.rescale_center = aug.center;
    report.rescale_factor = std::sqrt(area0 / land_area(state.map));
    std::vector<Vec2> coords = state.map.coords();
    for (auto& p : coords) p = report.rescale_center + report.rescale_factor * (p - report.rescale_center);

    DiffusionResult out;
    out.map = state.map.with_coords(std::move(coords));
    report.flipped_land_faces = 0;
    for (int f = 0; f < out.map.face_count(); ++f)
        if (out.map.is_land(f) && !(out.map.signed_area(f) > 0.0)) ++report.flipped_land_faces;
    report.land_density = normalized_land_density(out.map, population);
    report.land_median = median(report.land_density);
    report.land_iqr = interquartile_range(report.land_density);
    report.land_sd_over_mean = sd_over_mean(report.land_density);
    out.report = std::move(report);
    return out;
}

} // namespace deq
