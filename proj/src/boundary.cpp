#include "deq/boundary.hpp"

#include "deq/error.hpp"
#include "deq/log.hpp"
#include "deq/predicates.hpp"

#include <cmath>
#include <numbers>

namespace deq {

BoundaryCurve make_boundary_curve(std::vector<Vec3> points)
{
    BoundaryCurve c;
    const int n = static_cast<int>(points.size());
    c.vertices.resize(n);
    for (int i = 0; i < n; ++i) c.vertices[i] = i;
    c.points = std::move(points);
    c.edge_lengths.resize(n);
    for (int i = 0; i < n; ++i) {
        c.edge_lengths[i] = (c.points[(i + 1) % n] - c.points[i]).norm();
        c.total_length += c.edge_lengths[i];
    }
    return c;
}

std::vector<double> discrete_curvature(const BoundaryCurve& curve)
{
    const int n = static_cast<int>(curve.points.size());
    if (n < 3) throw GeometryError("boundary curve needs at least 3 vertices");
    std::vector<Vec3> tangent(n);
    for (int i = 0; i < n; ++i) {
        const Vec3 d = curve.points[(i + 1) % n] - curve.points[i];
        const double len = d.norm();
        if (!(len > 0.0)) throw GeometryError("boundary edge " + std::to_string(i) + " has zero length");
        tangent[i] = d / len;
    }
    std::vector<double> angle(n);
    for (int i = 0; i < n; ++i) {
        const Vec3& in = tangent[(i + n - 1) % n];
        const Vec3& out = tangent[i];
        angle[i] = std::atan2(in.cross(out).norm(), in.dot(out));
        if (angle[i] > std::numbers::pi - 1e-12)
            throw GeometryError("ill-conditioned boundary corner at vertex " + std::to_string(i) +
                                " (edges fold back on each other)");
    }
    return angle;
}

FlatCurve flatten_boundary(const BoundaryCurve& curve)
{
    const std::vector<double> kappa = discrete_curvature(curve);
    const int n = static_cast<int>(kappa.size());
    double total = 0.0;
    for (double k : kappa) total += k;
    if (!(total > 0.0)) throw GeometryError("boundary has zero total curvature");

    FlatCurve flat;
    flat.total_length = curve.total_length;
    flat.target_curvature.resize(n);
    for (int i = 0; i < n; ++i) flat.target_curvature[i] = 2.0 * std::numbers::pi * kappa[i] / total;

    // Turning is applied at a vertex before walking the edge that leaves it.
    std::vector<Vec2> phi(n + 1);
    std::vector<double> arclength(n + 1, 0.0);
    phi[0] = Vec2::Zero();
    double theta = 0.0;
    for (int m = 0; m < n; ++m) {
        theta += flat.target_curvature[m];
        phi[m + 1] = phi[m] + curve.edge_lengths[m] * Vec2(std::cos(theta), std::sin(theta));
        arclength[m + 1] = arclength[m] + curve.edge_lengths[m];
    }
    const double length = arclength[n];
    const Vec2 gap = phi[n] - phi[0];
    flat.closure_gap = gap.norm();
    if (flat.closure_gap > 0.1 * length) {
        warn("boundary closure gap " + std::to_string(flat.closure_gap) + " exceeds 10% of the boundary length " +
             std::to_string(length) + "; the flattened curve may not be convex");
    }

    std::vector<Vec2> adjusted(n + 1);
    for (int m = 0; m <= n; ++m) adjusted[m] = phi[m] - (arclength[m] / length) * gap;
    flat.endpoint_residual = (adjusted[n] - adjusted[0]).norm();
    adjusted.pop_back();
    flat.points = std::move(adjusted);
    return flat;
}

ConvexityReport verify_convex_simple(const std::vector<Vec2>& polygon)
{
    ConvexityReport r;
    const int n = static_cast<int>(polygon.size());
    if (n < 3) return r;

    Vec2 lo = polygon[0], hi = polygon[0];
    for (const auto& p : polygon) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double scale = (hi - lo).norm();

    std::vector<Vec2> edge(n);
    for (int i = 0; i < n; ++i) edge[i] = polygon[(i + 1) % n] - polygon[i];

    r.convex = true;
    double turning = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = edge[i];
        const Vec2& b = edge[(i + 1) % n];
        const double cross = a.x() * b.y() - a.y() * b.x();
        if (cross < -1e-9 * scale * scale) r.convex = false;
        turning += std::atan2(cross, a.dot(b));
    }
    r.turning_number = static_cast<int>(std::lround(turning / (2.0 * std::numbers::pi)));

    r.simple = true;
    for (int i = 0; i < n && r.simple; ++i) {
        if (edge[i].squaredNorm() == 0.0) {
            r.simple = false;
            break;
        }
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[(i + 1) % n];
        // Adjacent edges may only share their common endpoint.
        const Vec2& c = polygon[(i + 2) % n];
        if (predicates::orient_sign(a, b, c) == 0 && edge[i].dot(edge[(i + 1) % n]) < 0.0) r.simple = false;
        for (int j = i + 2; j < n && r.simple; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (predicates::segments_intersect(a, b, polygon[j], polygon[(j + 1) % n])) r.simple = false;
        }
    }
    if (n == 3) r.simple = r.simple && predicates::orient_sign(polygon[0], polygon[1], polygon[2]) != 0;
    return r;
}

} // namespace deq
