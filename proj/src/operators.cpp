#include "deq/operators.hpp"

#include "deq/error.hpp"

#include <cmath>

namespace deq {

SparseMatrix LaplacianPair::D() const
{
    std::vector<Triplet> t;
    t.reserve(mass.size());
    for (int i = 0; i < mass.size(); ++i) t.push_back({i, i, mass[i]});
    return assemble(t, static_cast<int>(mass.size()), static_cast<int>(mass.size()));
}

Eigen::VectorXd LaplacianPair::apply(const Eigen::VectorXd& u) const
{
    return (L * u).cwiseQuotient(mass);
}

LaplacianPair cotan_laplacian(const PlanarMap& map)
{
    const auto& p = map.coords();
    const int n = map.vertex_count();
    // Unsigned areas: a face flipped by advection still contributes its mass.
    std::vector<double> vertex_area(n, 0.0);
    std::vector<int> bad;
    for (int f = 0; f < map.face_count(); ++f) {
        const double a = std::abs(map.signed_area(f));
        if (!(a > 0.0)) bad.push_back(f);
        for (int v : map.faces()[f]) vertex_area[v] += a / 3.0;
    }
    if (!bad.empty()) throw DegenerateFaceError("zero-area faces in Laplacian", bad);
    const EdgeTopology topo = build_edge_topology(map.faces());

    // Cotangent of the angle at the vertex opposite edge (a, b) inside face f.
    auto opposite_cot = [&](int f, int a, int b) {
        const auto& t = map.faces()[f];
        int c = t[0];
        for (int v : t)
            if (v != a && v != b) c = v;
        const Vec2 u = p[a] - p[c];
        const Vec2 w = p[b] - p[c];
        return u.dot(w) / std::abs(u.x() * w.y() - u.y() * w.x());
    };

    std::vector<Triplet> trips;
    trips.reserve(topo.edges.size() * 4);
    for (int e = 0; e < topo.edge_count(); ++e) {
        const auto [a, b] = topo.edges[e];
        const auto [f0, f1] = topo.edge_faces[e];
        double w = opposite_cot(f0, a, b);
        if (f1 >= 0) w += opposite_cot(f1, a, b);
        trips.push_back({a, b, w});
        trips.push_back({b, a, w});
        trips.push_back({a, a, -w});
        trips.push_back({b, b, -w});
    }
    LaplacianPair out;
    out.L = assemble(trips, n, n);
    out.mass.resize(n);
    for (int i = 0; i < n; ++i) out.mass[i] = 2.0 * vertex_area[i];
    return out;
}

TransitionSet transitions(const PlanarMap& map)
{
    const int nv = map.vertex_count();
    const int nf = map.face_count();
    std::vector<int> count(nv, 0);
    std::vector<double> area_sum(nv, 0.0);
    std::vector<double> areas(nf);
    for (int f = 0; f < nf; ++f) {
        areas[f] = std::abs(map.signed_area(f));
        for (int v : map.faces()[f]) {
            ++count[v];
            area_sum[v] += areas[f];
        }
    }
    for (int v = 0; v < nv; ++v)
        if (count[v] == 0) throw TopologyError("vertex " + std::to_string(v) + " has no incident face");

    std::vector<Triplet> vf, fv, wfv;
    vf.reserve(3 * nf);
    fv.reserve(3 * nf);
    wfv.reserve(3 * nf);
    for (int f = 0; f < nf; ++f) {
        for (int v : map.faces()[f]) {
            vf.push_back({f, v, 1.0 / 3.0});
            fv.push_back({v, f, 1.0 / count[v]});
            wfv.push_back({v, f, areas[f] / area_sum[v]});
        }
    }
    return {assemble(vf, nf, nv), assemble(fv, nv, nf), assemble(wfv, nv, nf)};
}

std::vector<Vec2> face_gradient(const PlanarMap& map, const Eigen::VectorXd& rho_v)
{
    if (rho_v.size() != map.vertex_count()) throw GeometryError("vertex field has wrong length");
    const auto& p = map.coords();
    std::vector<Vec2> grad(map.face_count());
    std::vector<int> bad;
    for (int f = 0; f < map.face_count(); ++f) {
        const auto [i, j, k] = map.faces()[f];
        const double area = map.signed_area(f);
        if (area == 0.0) {
            bad.push_back(f);
            continue;
        }
        const Vec2 e_jk = p[k] - p[j];
        const Vec2 e_ki = p[i] - p[k];
        const Vec2 e_ij = p[j] - p[i];
        const Vec2 s = rho_v[i] * e_jk + rho_v[j] * e_ki + rho_v[k] * e_ij;
        // +z × s, scaled by 1/(2 signed area); the signed area keeps the defining
        // relations valid for either face orientation.
        grad[f] = Vec2(-s.y(), s.x()) / (2.0 * area);
    }
    if (!bad.empty()) throw DegenerateFaceError("zero-area faces in gradient", bad);
    return grad;
}

std::vector<Vec2> faces_to_vertices(const SparseMatrix& w_fv, std::span<const Vec2> face_values)
{
    if (static_cast<int>(face_values.size()) != w_fv.cols()) throw GeometryError("face field has wrong length");
    Eigen::MatrixXd fvals(face_values.size(), 2);
    for (std::size_t f = 0; f < face_values.size(); ++f) fvals.row(f) = face_values[f].transpose();
    const Eigen::MatrixXd vvals = w_fv * fvals;
    std::vector<Vec2> out(vvals.rows());
    for (Eigen::Index v = 0; v < vvals.rows(); ++v) out[v] = vvals.row(v).transpose();
    return out;
}

} // namespace deq
