#include "deq/flatten.hpp"

#include "deq/error.hpp"
#include "deq/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deq {

std::string to_string(InitKind kind) { return kind == InitKind::tutte ? "tutte" : "authalic"; }

InitKind parse_init_kind(const std::string& name)
{
    if (name == "tutte") return InitKind::tutte;
    if (name == "authalic") return InitKind::authalic;
    throw ConfigError("unknown initializer '" + name + "' (expected tutte or authalic)");
}

namespace {

constexpr double kCotClamp = 1e4;

// Directed weight w_ij for row i, column j.
struct DirectedWeight {
    int i;
    int j;
    double w;
};

std::vector<DirectedWeight> tutte_weights(const TriMesh& mesh)
{
    std::vector<DirectedWeight> out;
    for (const auto& [a, b] : mesh.topology().edges) {
        out.push_back({a, b, 1.0});
        out.push_back({b, a, 1.0});
    }
    return out;
}

std::vector<DirectedWeight> authalic_weights(const TriMesh& mesh)
{
    const auto& x = mesh.vertices();
    // Cotangent of the angle at `at` in face f, between the edges towards the
    // other two vertices.
    auto cot_at = [&](int f, int at) {
        const auto& t = mesh.faces()[f];
        int k = 0;
        while (t[k] != at) ++k;
        const Vec3 u = x[t[(k + 1) % 3]] - x[at];
        const Vec3 v = x[t[(k + 2) % 3]] - x[at];
        const double c = u.dot(v) / u.cross(v).norm();
        return std::clamp(c, -kCotClamp, kCotClamp);
    };

    const auto& topo = mesh.topology();
    std::vector<DirectedWeight> out;
    out.reserve(2 * topo.edges.size());
    for (int e = 0; e < topo.edge_count(); ++e) {
        const auto [a, b] = topo.edges[e];
        const auto [f0, f1] = topo.edge_faces[e];
        const double len2 = (x[a] - x[b]).squaredNorm();
        // Row a uses the angles at b, row b the angles at a.
        double at_b = cot_at(f0, b);
        double at_a = cot_at(f0, a);
        if (f1 >= 0) {
            at_b += cot_at(f1, b);
            at_a += cot_at(f1, a);
        }
        out.push_back({a, b, at_b / len2});
        out.push_back({b, a, at_a / len2});
    }
    return out;
}

PlanarMap assemble_map(const TriMesh& mesh, const FlattenSystem& system, const Eigen::MatrixXd& solution)
{
    std::vector<Vec2> coords = system.boundary_positions;
    for (std::size_t r = 0; r < system.interior.size(); ++r)
        coords[system.interior[r]] = Vec2(solution(r, 0), solution(r, 1));
    return PlanarMap(std::move(coords), mesh.faces());
}

Eigen::MatrixXd solve_system(const FlattenSystem& system)
{
    if (system.interior.empty()) return Eigen::MatrixXd(0, 2);
    const SolveResult res = system.kind == InitKind::tutte ? solve_spd(system.matrix, system.rhs)
                                                           : solve_general(system.matrix, system.rhs);
    return res.x;
}

} // namespace

FlattenSystem build_flatten_system(const TriMesh& mesh, const BoundaryCurve& boundary, const FlatCurve& flat,
                                   InitKind kind)
{
    if (boundary.vertices.size() != flat.points.size())
        throw GeometryError("flattened boundary has " + std::to_string(flat.points.size()) +
                            " points but the mesh boundary has " + std::to_string(boundary.vertices.size()));

    FlattenSystem sys;
    sys.kind = kind;
    const int n = mesh.vertex_count();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sys.boundary_positions.assign(n, Vec2(nan, nan));
    std::vector<int> row_of(n, -1);
    std::vector<char> on_boundary(n, 0);
    for (std::size_t k = 0; k < boundary.vertices.size(); ++k) {
        on_boundary[boundary.vertices[k]] = 1;
        sys.boundary_positions[boundary.vertices[k]] = flat.points[k];
    }
    for (int v = 0; v < n; ++v) {
        if (!on_boundary[v]) {
            row_of[v] = static_cast<int>(sys.interior.size());
            sys.interior.push_back(v);
        }
    }

    const auto weights = kind == InitKind::tutte ? tutte_weights(mesh) : authalic_weights(mesh);
    const int m = static_cast<int>(sys.interior.size());
    std::vector<Triplet> trips;
    trips.reserve(weights.size() + m);
    sys.rhs = Eigen::MatrixXd::Zero(m, 2);
    for (const auto& [i, j, w] : weights) {
        const int r = row_of[i];
        if (r < 0) continue;
        trips.push_back({r, r, w});
        if (row_of[j] >= 0) {
            trips.push_back({r, row_of[j], -w});
        } else {
            sys.rhs(r, 0) += w * sys.boundary_positions[j].x();
            sys.rhs(r, 1) += w * sys.boundary_positions[j].y();
        }
    }
    sys.matrix = assemble(trips, m, m);
    return sys;
}

PlanarMap tutte_flatten(const TriMesh& mesh, const FlatCurve& boundary)
{
    const BoundaryCurve curve = boundary_loop_ccw(mesh);
    const FlattenSystem sys = build_flatten_system(mesh, curve, boundary, InitKind::tutte);
    PlanarMap map = assemble_map(mesh, sys, solve_system(sys));
    if (const int flips = check_no_flips(map); flips > 0)
        throw GeometryError("Tutte embedding produced " + std::to_string(flips) +
                            " flipped faces; the boundary polygon is not convex");
    return map;
}

AuthalicResult authalic_flatten(const TriMesh& mesh, const FlatCurve& boundary)
{
    const BoundaryCurve curve = boundary_loop_ccw(mesh);
    const FlattenSystem sys = build_flatten_system(mesh, curve, boundary, InitKind::authalic);
    AuthalicResult out{assemble_map(mesh, sys, solve_system(sys)), 0};
    out.flipped_faces = check_no_flips(out.map);
    if (out.flipped_faces > 0)
        warn("authalic initialization has " + std::to_string(out.flipped_faces) + " flipped faces");
    return out;
}

PlanarMap initial_flatten(const TriMesh& mesh, InitKind kind, bool strict)
{
    const FlatCurve flat = flatten_boundary(boundary_loop_ccw(mesh));
    if (kind == InitKind::tutte) return tutte_flatten(mesh, flat);
    AuthalicResult res = authalic_flatten(mesh, flat);
    if (res.flipped_faces > 0 && strict) {
        warn("falling back to the Tutte initialization");
        return tutte_flatten(mesh, flat);
    }
    return std::move(res.map);
}

} // namespace deq
