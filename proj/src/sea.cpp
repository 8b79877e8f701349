#include "deq/sea.hpp"

#include "deq/cdt.hpp"
#include "deq/error.hpp"
#include "deq/log.hpp"
#include "deq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace deq {

void SeaConfig::validate() const
{
    if (!(shrink_radius > 0.0 && shrink_radius < 1.0))
        throw ConfigError("shrink radius must lie in (0, 1), got " + std::to_string(shrink_radius));
    if (!(truncate_radius > 1.0)) throw ConfigError("truncate radius must exceed 1");
    if (!(gap_spacing >= 0.0) || !std::isfinite(gap_spacing)) throw ConfigError("gap spacing must be >= 0");
}

NormalizedLand normalize_into_disk(const PlanarMap& land, const SeaConfig& cfg)
{
    cfg.validate();
    NormalizedLand out;
    out.center = land_centroid(land);
    double rmax = 0.0;
    for (const auto& p : land.coords()) rmax = std::max(rmax, (p - out.center).norm());
    if (!(rmax > 0.0)) throw GeometryError("land map has zero extent");
    out.land_scale = cfg.shrink_radius / rmax;
    std::vector<Vec2> z;
    z.reserve(land.vertex_count());
    for (const auto& p : land.coords()) z.push_back((p - out.center) * out.land_scale);
    out.map = land.with_coords(std::move(z));
    return out;
}

namespace {

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b)
{
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * d)).norm();
}

bool inside_polygon(const Vec2& p, const std::vector<Vec2>& poly)
{
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x) in = !in;
        }
    }
    return in;
}

std::vector<Vec2> boundary_polygon(const PlanarMap& map)
{
    std::vector<Vec2> poly;
    for (int v : boundary_loop(map.faces(), map.vertex_count())) poly.push_back(map.coords()[v]);
    return poly;
}

DiskTriangulation triangulate_once(const PlanarMap& land, const std::vector<int>& loop,
                                   const std::vector<Vec2>& interior, const std::vector<Vec2>& ring)
{
    const int b = static_cast<int>(loop.size());
    const int g = static_cast<int>(interior.size());
    const int r = static_cast<int>(ring.size());
    const int n_land = land.vertex_count();

    std::vector<Vec2> pts;
    pts.reserve(b + g + r);
    for (int v : loop) pts.push_back(land.coords()[v]);
    pts.insert(pts.end(), interior.begin(), interior.end());
    pts.insert(pts.end(), ring.begin(), ring.end());
    std::vector<std::array<int, 2>> segs;
    for (int k = 0; k < b; ++k) segs.push_back({k, (k + 1) % b});
    for (int k = 0; k < r; ++k) segs.push_back({b + g + k, b + g + (k + 1) % r});

    const CdtResult cdt = constrained_delaunay(pts, segs);
    auto global = [&](int k) { return k < b ? loop[k] : n_land + (k - b); };

    std::vector<Vec2> coords = land.coords();
    coords.insert(coords.end(), interior.begin(), interior.end());
    coords.insert(coords.end(), ring.begin(), ring.end());
    std::vector<Face> faces = land.faces();
    std::vector<std::uint8_t> mask = land.land_mask();
    std::vector<int> prov = land.provenance();
    prov.resize(coords.size(), -1);
    std::vector<char> used(coords.size(), 0);
    for (const auto& f : land.faces())
        for (int v : f) used[v] = 1;
    for (const auto& t : triangles_at_depth(cdt, 1)) {
        const Face f{global(t[0]), global(t[1]), global(t[2])};
        for (int v : f) used[v] = 1;
        faces.push_back(f);
        mask.push_back(0);
    }
    if (std::find(used.begin(), used.end(), 0) != used.end())
        throw GeometryError("gap triangulation left points unused");

    DiskTriangulation out{PlanarMap(std::move(coords), std::move(faces), std::move(mask), std::move(prov)), {}};
    out.ring.resize(r);
    std::iota(out.ring.begin(), out.ring.end(), n_land + g);
    return out;
}

} // namespace

GapPoints generate_gap_points(const PlanarMap& normalized_land, double spacing)
{
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("gap spacing must be positive");
    const int ring_count = static_cast<int>(std::ceil(2.0 * std::numbers::pi / spacing));
    if (ring_count < 8)
        throw ConfigError("gap spacing " + std::to_string(spacing) + " leaves only " + std::to_string(ring_count) +
                          " points on the unit circle (need at least 8)");

    GapPoints out;
    out.ring.reserve(ring_count);
    for (int k = 0; k < ring_count; ++k) {
        const double a = 2.0 * std::numbers::pi * k / ring_count;
        out.ring.emplace_back(std::cos(a), std::sin(a));
    }

    const std::vector<Vec2> poly = boundary_polygon(normalized_land);
    double land_radius = 0.0;
    for (const auto& p : poly) land_radius = std::max(land_radius, p.norm());

    const double half = 0.5 * spacing;
    const double dy = spacing * std::sqrt(3.0) / 2.0;
    const int rows = static_cast<int>(std::floor(1.0 / dy));
    const int cols = static_cast<int>(std::floor(1.0 / spacing)) + 1;
    for (int j = -rows; j <= rows; ++j) {
        const double shift = (j % 2 != 0) ? half : 0.0;
        for (int i = -cols; i <= cols; ++i) {
            const Vec2 z(i * spacing + shift, j * dy);
            const double r = z.norm();
            if (r > 1.0 - half) continue;
            if (r <= land_radius + half) {
                if (inside_polygon(z, poly)) continue;
                bool near = false;
                for (std::size_t k = 0; k < poly.size() && !near; ++k)
                    near = segment_distance(z, poly[k], poly[(k + 1) % poly.size()]) < half;
                if (near) continue;
            }
            out.interior.push_back(z);
        }
    }
    return out;
}

DiskTriangulation triangulate_gap(const PlanarMap& normalized_land, const GapPoints& gap, std::uint64_t seed)
{
    const std::vector<int> loop = boundary_loop(normalized_land.faces(), normalized_land.vertex_count());
    try {
        return triangulate_once(normalized_land, loop, gap.interior, gap.ring);
    } catch (const GeometryError& e) {
        warn(std::string("gap triangulation failed (") + e.what() + "); retrying with jittered points");
    }
    std::mt19937_64 rng(seed);
    const double amp = 1e-3 * mean_edge_length(normalized_land);
    std::uniform_real_distribution<double> u(-amp, amp);
    std::vector<Vec2> jittered = gap.interior;
    for (auto& p : jittered) p += Vec2(u(rng), u(rng));
    return triangulate_once(normalized_land, loop, jittered, gap.ring);
}

GluedMap reflect_glue(const DiskTriangulation& disk)
{
    const PlanarMap& m = disk.map;
    const int n = m.vertex_count();
    std::vector<char> on_ring(n, 0);
    for (int v : disk.ring) on_ring[v] = 1;

    std::vector<Vec2> coords = m.coords();
    std::vector<int> prov = m.provenance();
    std::vector<int> source(n, -1);
    std::vector<int> mirror(n, -1);
    int skipped = 0;
    for (int v = 0; v < n; ++v) {
        if (on_ring[v]) {
            mirror[v] = v;
            continue;
        }
        const Vec2& z = m.coords()[v];
        const double r2 = z.squaredNorm();
        if (std::sqrt(r2) < 1e-6) {
            ++skipped;
            continue;
        }
        mirror[v] = static_cast<int>(coords.size());
        coords.push_back(z / r2);
        prov.push_back(-1);
        source.push_back(v);
    }
    if (skipped > 0)
        warn(std::to_string(skipped) + " vertices within 1e-6 of the origin were not reflected");

    std::vector<Face> faces = m.faces();
    std::vector<std::uint8_t> mask = m.land_mask();
    for (const auto& [i, j, k] : m.faces()) {
        if (mirror[i] < 0 || mirror[j] < 0 || mirror[k] < 0) continue;
        faces.push_back({mirror[i], mirror[k], mirror[j]});
        mask.push_back(0);
    }
    return {PlanarMap(std::move(coords), std::move(faces), std::move(mask), std::move(prov)), disk.ring,
            std::move(source)};
}

namespace {

// Faces reachable from face `seed` across shared edges, restricted to `keep`.
void restrict_to_component(const std::vector<Face>& faces, std::vector<char>& keep, int seed)
{
    std::vector<Face> kept;
    std::vector<int> ids;
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (keep[f]) {
            kept.push_back(faces[f]);
            ids.push_back(static_cast<int>(f));
        }
    const EdgeTopology topo = build_edge_topology(kept);
    std::vector<std::vector<int>> adj(kept.size());
    for (int e = 0; e < topo.edge_count(); ++e) {
        const auto [a, b] = topo.edge_faces[e];
        if (b < 0) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    const auto it = std::find(ids.begin(), ids.end(), seed);
    if (it == ids.end()) throw TopologyError("land was removed during sea truncation");
    std::vector<char> seen(kept.size(), 0);
    std::vector<int> stack{static_cast<int>(it - ids.begin())};
    seen[stack.back()] = 1;
    while (!stack.empty()) {
        const int f = stack.back();
        stack.pop_back();
        for (int g : adj[f])
            if (!seen[g]) {
                seen[g] = 1;
                stack.push_back(g);
            }
    }
    for (std::size_t k = 0; k < kept.size(); ++k)
        if (!seen[k]) keep[ids[k]] = 0;
}

// Removes faces so that no vertex has more than one edge-connected fan. The
// fan holding a land face (or else the largest) survives. Returns the number
// of faces dropped.
int remove_pinches(const std::vector<Face>& faces, const std::vector<std::uint8_t>& land, std::vector<char>& keep,
                   int vertex_count)
{
    std::vector<std::vector<int>> incident(vertex_count);
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (keep[f])
            for (int v : faces[f]) incident[v].push_back(static_cast<int>(f));

    int dropped = 0;
    for (int v = 0; v < vertex_count; ++v) {
        const auto& fs = incident[v];
        if (fs.size() < 2) continue;
        // Union faces around v that share an edge through v.
        std::vector<int> parent(fs.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t a = 0; a < fs.size(); ++a)
            for (std::size_t b = a + 1; b < fs.size(); ++b) {
                int shared = 0;
                for (int x : faces[fs[a]])
                    for (int y : faces[fs[b]])
                        if (x == y && x != v) ++shared;
                if (shared > 0) parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
            }
        std::vector<int> size(fs.size(), 0);
        std::vector<char> has_land(fs.size(), 0);
        for (std::size_t a = 0; a < fs.size(); ++a) {
            ++size[find(static_cast<int>(a))];
            if (land[fs[a]]) has_land[find(static_cast<int>(a))] = 1;
        }
        int roots = 0, best = -1;
        for (std::size_t a = 0; a < fs.size(); ++a) {
            if (find(static_cast<int>(a)) != static_cast<int>(a)) continue;
            ++roots;
            if (best < 0 || has_land[a] > has_land[best] || (has_land[a] == has_land[best] && size[a] > size[best]))
                best = static_cast<int>(a);
        }
        if (roots < 2) continue;
        for (std::size_t a = 0; a < fs.size(); ++a)
            if (find(static_cast<int>(a)) != best && keep[fs[a]]) {
                keep[fs[a]] = 0;
                ++dropped;
            }
    }
    return dropped;
}

} // namespace

AugmentedMap truncate_and_rescale(const GluedMap& glued, const PlanarMap& land, const NormalizedLand& norm,
                                  const SeaConfig& cfg)
{
    const PlanarMap& m = glued.map;
    const int n = m.vertex_count();
    const auto& z = m.coords();
    const double limit = cfg.truncate_radius;

    // Mirror faces come out clockwise when the circumcircle of their source
    // contains the origin; their mirrored vertices always go.
    std::vector<char> must_go(n, 0);
    for (int f = 0; f < m.face_count(); ++f)
        if (!(m.signed_area(f) > 0.0))
            for (int v : m.faces()[f])
                if (glued.mirror_source[v] >= 0) must_go[v] = 1;

    // The far region: vertices beyond the limit connected to the farthest one
    // or to a vertex that must go.
    std::vector<std::vector<int>> adj(n);
    for (const auto& f : m.faces())
        for (int k = 0; k < 3; ++k) {
            adj[f[k]].push_back(f[(k + 1) % 3]);
            adj[f[(k + 1) % 3]].push_back(f[k]);
        }
    std::vector<char> removed(n, 0);
    std::vector<int> stack;
    int farthest = -1;
    for (int v = 0; v < n; ++v) {
        if (z[v].norm() > limit && (farthest < 0 || z[v].norm() > z[farthest].norm())) farthest = v;
        if (must_go[v]) {
            removed[v] = 1;
            stack.push_back(v);
        }
    }
    if (farthest >= 0 && !removed[farthest]) {
        removed[farthest] = 1;
        stack.push_back(farthest);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!removed[w] && z[w].norm() > limit) {
                removed[w] = 1;
                stack.push_back(w);
            }
    }
    int stragglers = 0;
    for (int v = 0; v < n; ++v)
        if (!removed[v] && z[v].norm() > limit) ++stragglers;
    if (stragglers > 0)
        warn(std::to_string(stragglers) +
             " vertices beyond the truncation radius are enclosed by kept faces and were retained");

    std::vector<char> keep(m.face_count(), 1);
    for (int f = 0; f < m.face_count(); ++f)
        for (int v : m.faces()[f])
            if (removed[v]) keep[f] = 0;
    restrict_to_component(m.faces(), keep, 0);
    for (int round = 0; round < 64; ++round) {
        if (remove_pinches(m.faces(), m.land_mask(), keep, n) == 0) break;
        restrict_to_component(m.faces(), keep, 0);
    }

    std::vector<int> new_index(n, -1);
    std::vector<Face> faces;
    std::vector<std::uint8_t> mask;
    for (int f = 0; f < m.face_count(); ++f) {
        if (!keep[f]) continue;
        faces.push_back(m.faces()[f]);
        mask.push_back(m.land_mask()[f]);
        for (int v : m.faces()[f]) new_index[v] = 0;
    }
    std::vector<Vec2> coords;
    std::vector<int> prov;
    for (int v = 0; v < n; ++v) {
        if (new_index[v] < 0) continue;
        new_index[v] = static_cast<int>(coords.size());
        coords.push_back(v < land.vertex_count() ? land.coords()[v] : Vec2(z[v] / norm.land_scale + norm.center));
        prov.push_back(m.provenance()[v]);
    }
    for (int v = 0; v < land.vertex_count(); ++v)
        if (new_index[v] != v) throw TopologyError("land vertex lost during sea truncation");
    for (auto& f : faces)
        for (int& v : f) v = new_index[v];

    AugmentedMap out;
    out.map = PlanarMap(std::move(coords), std::move(faces), std::move(mask), std::move(prov));
    out.land_scale = norm.land_scale;
    out.center = norm.center;
    out.land_vertex_count = land.vertex_count();
    out.land_face_count = land.face_count();
    for (int v : glued.ring)
        if (new_index[v] >= 0) out.circle_ring.push_back(new_index[v]);

    const MeshDiagnostics diag = validate_disk_topology(out.map);
    if (diag.euler_characteristic != 1 || diag.boundary_loop_count != 1 || diag.nonmanifold_edge_count != 0 ||
        diag.nonmanifold_vertex_count != 0)
        throw TopologyError("augmented map is not a disk (Euler characteristic " +
                            std::to_string(diag.euler_characteristic) + ", " +
                            std::to_string(diag.boundary_loop_count) + " boundary loops)");
    return out;
}

// Caps the automatic spacing so coarse land still gets 16 ring points.
constexpr double kMaxAutoGapSpacing = 2.0 * std::numbers::pi / 16.0;

AugmentedMap build_sea(const PlanarMap& land, const SeaConfig& cfg)
{
    const NormalizedLand norm = normalize_into_disk(land, cfg);
    const double spacing =
        cfg.gap_spacing > 0.0 ? cfg.gap_spacing : std::min(mean_edge_length(norm.map), kMaxAutoGapSpacing);
    const GapPoints gap = generate_gap_points(norm.map, spacing);
    const DiskTriangulation disk = triangulate_gap(norm.map, gap, cfg.seed);
    return truncate_and_rescale(reflect_glue(disk), land, norm, cfg);
}

DensityField extend_density(const AugmentedMap& aug, const Eigen::VectorXd& rho_f_land, bool area_weighted)
{
    if (rho_f_land.size() != aug.land_face_count)
        throw DensityError("land density has " + std::to_string(rho_f_land.size()) + " entries for " +
                           std::to_string(aug.land_face_count) + " land faces");
    for (Eigen::Index f = 0; f < rho_f_land.size(); ++f)
        if (!(rho_f_land[f] > 0.0) || !std::isfinite(rho_f_land[f]))
            throw DensityError("land density of face " + std::to_string(f) + " is not a positive number");

    double sea_value = 0.0;
    if (area_weighted) {
        double area = 0.0;
        for (int f = 0; f < aug.land_face_count; ++f) {
            const double a = std::abs(aug.map.signed_area(f));
            sea_value += a * rho_f_land[f];
            area += a;
        }
        sea_value /= area;
    } else {
        sea_value = rho_f_land.mean();
    }

    DensityField d;
    d.rho_f = Eigen::VectorXd::Constant(aug.map.face_count(), sea_value);
    d.rho_f.head(aug.land_face_count) = rho_f_land;
    d.rho_v = transitions(aug.map).m_fv * d.rho_f;
    return d;
}

} // namespace deq
