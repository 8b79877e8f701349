#include "deq/applications.hpp"

#include "deq/cdt.hpp"
#include "deq/error.hpp"
#include "deq/log.hpp"
#include "deq/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace deq {

std::vector<double> resolve_population(const TriMesh& mesh, const PopulationSpec& spec)
{
    const int nf = mesh.face_count();
    std::vector<double> pop(nf, 1.0);
    switch (spec.mode) {
    case PopulationMode::uniform:
        break;
    case PopulationMode::per_face:
        if (static_cast<int>(spec.values.size()) != nf)
            throw ConfigError("population has " + std::to_string(spec.values.size()) + " values for " +
                              std::to_string(nf) + " faces");
        pop = spec.values;
        break;
    case PopulationMode::area:
    case PopulationMode::region_scaled:
        pop = geometry_measures(mesh).face_areas;
        break;
    }
    if (spec.mode == PopulationMode::region_scaled) {
        if (static_cast<int>(spec.region_labels.size()) != nf)
            throw ConfigError("region labels cover " + std::to_string(spec.region_labels.size()) + " of " +
                              std::to_string(nf) + " faces");
        const std::set<int> present(spec.region_labels.begin(), spec.region_labels.end());
        for (const auto& [id, m] : spec.multipliers) {
            if (!present.count(id)) throw ConfigError("rule names region " + std::to_string(id) + " with no faces");
            if (!(m > 0.0) || !std::isfinite(m))
                throw DensityError("multiplier for region " + std::to_string(id) + " must be positive");
        }
        for (int f = 0; f < nf; ++f)
            if (auto it = spec.multipliers.find(spec.region_labels[f]); it != spec.multipliers.end())
                pop[f] *= it->second;
    }
    for (int f = 0; f < nf; ++f)
        if (!(pop[f] > 0.0) || !std::isfinite(pop[f]))
            throw DensityError("population of face " + std::to_string(f) + " is not a positive number");
    return pop;
}

bool is_planar_xy(const TriMesh& mesh)
{
    if (mesh.vertex_count() == 0) return false;
    Vec3 lo = mesh.vertices()[0], hi = lo;
    for (const auto& p : mesh.vertices()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return hi.z() - lo.z() <= 1e-12 * (hi - lo).norm();
}

namespace {

PlanarMap initial_map(const TriMesh& mesh, const EqualizeOptions& opts, bool planar)
{
    if (planar) {
        std::vector<Vec2> xy;
        xy.reserve(mesh.vertex_count());
        for (const auto& p : mesh.vertices()) xy.emplace_back(p.x(), p.y());
        return ensure_ccw(PlanarMap(std::move(xy), mesh.faces()));
    }
    const PlanarMap flat = initial_flatten(mesh, opts.init, opts.strict_init);
    const double target = geometry_measures(mesh).total_area;
    const double current = land_area(flat);
    if (!(current > 0.0)) throw GeometryError("initial flattening has non-positive area");
    const Vec2 c = land_centroid(flat);
    const double s = std::sqrt(target / current);
    std::vector<Vec2> coords = flat.coords();
    for (auto& p : coords) p = c + s * (p - c);
    return flat.with_coords(std::move(coords));
}

} // namespace

EqualizeResult density_equalize(const TriMesh& mesh, const std::vector<double>& population,
                                const EqualizeOptions& opts)
{
    opts.sea.validate();
    opts.diffusion.validate();
    const MeshDiagnostics diag = validate_disk_topology(mesh);
    if (!diag.is_disk())
        throw TopologyError("input is not a simply-connected open surface (Euler characteristic " +
                            std::to_string(diag.euler_characteristic) + ", " +
                            std::to_string(diag.boundary_loop_count) + " boundary loops, " +
                            std::to_string(diag.nonmanifold_edge_count) + " non-manifold edges)");
    if (static_cast<int>(population.size()) != mesh.face_count())
        throw ConfigError("population size does not match the face count");

    EqualizeResult out;
    out.population = population;
    out.planar_input = is_planar_xy(mesh);
    out.initial = initial_map(mesh, opts, out.planar_input);

    Eigen::VectorXd rho(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const double a = out.initial.signed_area(f);
        if (!(a > 0.0))
            throw DensityError("initial map has a flipped face (" + std::to_string(f) +
                               "); retry with the Tutte initializer or --strict-init");
        rho[f] = population[f] / a;
    }

    out.augmented = build_sea(out.initial, opts.sea);
    const DensityField density = extend_density(out.augmented, rho, opts.sea_density_weighted);
    DiffusionResult run = run_to_convergence(out.augmented, density, opts.diffusion);
    out.augmented_final = std::move(run.map);
    out.report = std::move(run.report);

    const int nl = out.augmented.land_vertex_count;
    std::vector<Vec2> land_coords(out.augmented_final.coords().begin(), out.augmented_final.coords().begin() + nl);
    std::vector<Face> land_faces(out.augmented_final.faces().begin(),
                                 out.augmented_final.faces().begin() + out.augmented.land_face_count);
    out.land = PlanarMap(std::move(land_coords), std::move(land_faces));
    return out;
}

EqualizeResult density_equalize(const TriMesh& mesh, const PopulationSpec& spec, const EqualizeOptions& opts)
{
    return density_equalize(mesh, resolve_population(mesh, spec), opts);
}

AreaRatioStats area_ratio_stats(const TriMesh& mesh, const PlanarMap& land)
{
    const AreaMeasures m = geometry_measures(mesh);
    AreaRatioStats s;
    s.ratios.reserve(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) s.ratios.push_back(m.face_areas[f] / land.signed_area(f));
    s.median = median(s.ratios);
    s.sd_over_mean = sd_over_mean(s.ratios);
    return s;
}

AreaPreservingResult area_preserving_parameterize(const TriMesh& mesh, const EqualizeOptions& opts)
{
    AreaPreservingResult out;
    out.run = density_equalize(mesh, PopulationSpec{PopulationMode::area, {}, {}, {}}, opts);
    out.ratios = area_ratio_stats(mesh, out.run.land);
    return out;
}

namespace {

// Uniform grid of face bounding boxes for point location.
class FaceGrid {
public:
    FaceGrid(const PlanarMap& map, double cell) : map_(map)
    {
        lo_ = hi_ = map.coords()[0];
        for (const auto& p : map.coords()) {
            lo_ = lo_.cwiseMin(p);
            hi_ = hi_.cwiseMax(p);
        }
        cell_ = cell;
        nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / cell_)));
        ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / cell_)));
        cells_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (int f = 0; f < map.face_count(); ++f) {
            Vec2 a = map.coords()[map.faces()[f][0]], b = a;
            for (int v : map.faces()[f]) {
                a = a.cwiseMin(map.coords()[v]);
                b = b.cwiseMax(map.coords()[v]);
            }
            const auto [i0, j0] = index(a);
            const auto [i1, j1] = index(b);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) cells_[j * nx_ + i].push_back(f);
        }
    }

    std::pair<int, int> index(const Vec2& p) const
    {
        const int i = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_), 0, ny_ - 1);
        return {i, j};
    }

    /// Containing face, or -1.
    int locate(const Vec2& p) const
    {
        const auto [i, j] = index(p);
        for (int f : cells_[j * nx_ + i]) {
            const auto& t = map_.faces()[f];
            const auto& c = map_.coords();
            if (predicates::orient_sign(c[t[0]], c[t[1]], p) >= 0 && predicates::orient_sign(c[t[1]], c[t[2]], p) >= 0 &&
                predicates::orient_sign(c[t[2]], c[t[0]], p) >= 0)
                return f;
        }
        return -1;
    }

    /// Nearest face within `radius` (by distance to the triangle), or -1.
    int nearest(const Vec2& p, double radius) const
    {
        const auto [i0, j0] = index(p - Vec2(radius, radius));
        const auto [i1, j1] = index(p + Vec2(radius, radius));
        int best = -1;
        double best_d = radius;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                for (int f : cells_[j * nx_ + i]) {
                    const auto& t = map_.faces()[f];
                    double d = std::numeric_limits<double>::infinity();
                    for (int k = 0; k < 3; ++k) {
                        const Vec2 a = map_.coords()[t[k]], b = map_.coords()[t[(k + 1) % 3]];
                        const Vec2 e = b - a;
                        const double s = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
                        d = std::min(d, (p - (a + s * e)).norm());
                    }
                    if (d <= best_d) {
                        best_d = d;
                        best = f;
                    }
                }
        return best;
    }

private:
    const PlanarMap& map_;
    Vec2 lo_, hi_;
    double cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> cells_;
};

Eigen::Vector3d barycentric(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    const double l1 = ((p - a).x() * (c - a).y() - (p - a).y() * (c - a).x()) / det;
    const double l2 = ((b - a).x() * (p - a).y() - (b - a).y() * (p - a).x()) / det;
    return {1.0 - l1 - l2, l1, l2};
}

} // namespace

TriMesh remesh_surface(const TriMesh& mesh, const PlanarMap& land, const RemeshSpec& spec)
{
    if (land.vertex_count() == 0 || land.face_count() == 0) throw GeometryError("remeshing needs a non-empty map");
    if (land.face_count() != mesh.face_count()) throw GeometryError("map and mesh have different face counts");
    if (!(spec.spacing >= 0.0)) throw ConfigError("remesh spacing must be non-negative");
    const double l = spec.spacing > 0.0 ? spec.spacing : mean_edge_length(land);

    const std::vector<int> loop = boundary_loop(land.faces(), land.vertex_count());
    std::vector<Vec2> poly;
    for (int v : loop) poly.push_back(land.coords()[v]);
    Vec2 lo = poly[0], hi = poly[0];
    for (const auto& p : poly) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }

    const FaceGrid grid(land, 2.0 * l);
    std::vector<Vec2> samples(poly);
    std::vector<Vec3> lifted;
    for (int v : loop) lifted.push_back(mesh.vertices()[land.provenance()[v]]);

    auto near_boundary = [&](const Vec2& z) {
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Vec2 a = poly[k], e = poly[(k + 1) % poly.size()] - a;
            const double s = std::clamp((z - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
            if ((z - (a + s * e)).norm() < 0.5 * l) return true;
        }
        return false;
    };
    auto lift = [&](int f, const Vec2& z) {
        const auto& t = land.faces()[f];
        const auto& c = land.coords();
        Eigen::Vector3d w = barycentric(z, c[t[0]], c[t[1]], c[t[2]]);
        w = w.cwiseMax(0.0);
        w /= w.sum();
        Vec3 x = Vec3::Zero();
        for (int k = 0; k < 3; ++k) x += w[k] * mesh.vertices()[land.provenance()[t[k]]];
        return x;
    };

    const double dy = l * std::sqrt(3.0) / 2.0;
    int dropped = 0;
    for (int j = 0; lo.y() + j * dy <= hi.y(); ++j) {
        const double shift = (j % 2) ? 0.5 * l : 0.0;
        for (int i = 0; lo.x() + shift + i * l <= hi.x(); ++i) {
            const Vec2 z(lo.x() + shift + i * l, lo.y() + j * dy);
            if (near_boundary(z)) continue;
            int f = grid.locate(z);
            if (f < 0) {
                // Outside the land polygon entirely, or lost between faces to rounding.
                bool in = false;
                for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++)
                    if ((poly[a].y() > z.y()) != (poly[b].y() > z.y()) &&
                        z.x() < poly[a].x() + (z.y() - poly[a].y()) / (poly[b].y() - poly[a].y()) *
                                                  (poly[b].x() - poly[a].x()))
                        in = !in;
                if (!in) continue;
                f = grid.nearest(z, 0.1 * l);
                if (f < 0) {
                    ++dropped;
                    continue;
                }
            }
            samples.push_back(z);
            lifted.push_back(lift(f, z));
        }
    }
    if (dropped > 0) warn(std::to_string(dropped) + " remesh samples could not be located and were dropped");

    const int b = static_cast<int>(loop.size());
    std::vector<std::array<int, 2>> segs;
    for (int k = 0; k < b; ++k) segs.push_back({k, (k + 1) % b});
    const CdtResult cdt = constrained_delaunay(samples, segs);
    std::vector<Face> faces = triangles_at_depth(cdt, 1);
    return TriMesh(std::move(lifted), std::move(faces));
}

} // namespace deq
