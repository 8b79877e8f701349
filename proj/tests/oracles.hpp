#pragma once

// Independent reference implementations and generators for the tests. Nothing
// here calls into the library except for the plain data types.

#include "deq/mesh.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(int n, int m) { return Dense(n, std::vector<double>(m, 0.0)); }

/// Gaussian elimination with partial pivoting.
inline std::vector<double> lu_solve(Dense a, std::vector<double> b)
{
    const int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        if (a[p][k] == 0.0) throw std::runtime_error("singular");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline double tri_area(const deq::Vec2& a, const deq::Vec2& b, const deq::Vec2& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

/// Cotangent of the angle at `o` between rays to a and b, via atan2.
inline double cot_at(const deq::Vec2& o, const deq::Vec2& a, const deq::Vec2& b)
{
    const deq::Vec2 u = a - o, v = b - o;
    const double angle = std::abs(std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v)));
    return 1.0 / std::tan(angle);
}

struct DenseLaplacian {
    Dense L;
    std::vector<double> mass;
};

inline DenseLaplacian laplacian(const std::vector<deq::Vec2>& p, const std::vector<deq::Face>& faces)
{
    const int n = static_cast<int>(p.size());
    DenseLaplacian out{zeros(n, n), std::vector<double>(n, 0.0)};
    for (const auto& f : faces) {
        const double area = std::abs(tri_area(p[f[0]], p[f[1]], p[f[2]]));
        for (int k = 0; k < 3; ++k) {
            const int i = f[k], j = f[(k + 1) % 3], o = f[(k + 2) % 3];
            const double c = cot_at(p[o], p[i], p[j]);
            out.L[i][j] += c;
            out.L[j][i] += c;
            out.L[i][i] -= c;
            out.L[j][j] -= c;
            out.mass[f[k]] += 2.0 * area / 3.0;
        }
    }
    return out;
}

/// Gradient of the linear interpolant on triangle (a, b, c) from the two edge
/// conditions, solved by Cramer's rule.
inline deq::Vec2 gradient(const deq::Vec2& a, const deq::Vec2& b, const deq::Vec2& c, double ua, double ub, double uc)
{
    const deq::Vec2 e1 = b - a, e2 = c - a;
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    const double r1 = ub - ua, r2 = uc - ua;
    return {(r1 * e2.y() - r2 * e1.y()) / det, (e1.x() * r2 - e2.x() * r1) / det};
}

struct PlanarDisk {
    std::vector<deq::Vec2> coords;
    std::vector<deq::Face> faces;
};

inline PlanarDisk random_polar_grid(std::mt19937_64& rng, int rings, int sectors)
{
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    PlanarDisk d;
    d.coords.push_back({0.0, 0.0});
    const double dtheta = 2.0 * std::numbers::pi / sectors;
    for (int r = 1; r <= rings; ++r)
        for (int s = 0; s < sectors; ++s) {
            const double rad = r + (r < rings ? jitter(rng) : 0.5 * jitter(rng));
            const double th = (s + jitter(rng)) * dtheta;
            d.coords.push_back({rad * std::cos(th), rad * std::sin(th)});
        }
    auto idx = [&](int r, int s) { return 1 + (r - 1) * sectors + (s % sectors); };
    for (int s = 0; s < sectors; ++s) d.faces.push_back({0, idx(1, s), idx(1, s + 1)});
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < sectors; ++s) {
            d.faces.push_back({idx(r, s), idx(r + 1, s), idx(r + 1, s + 1)});
            d.faces.push_back({idx(r, s), idx(r + 1, s + 1), idx(r, s + 1)});
        }
    return d;
}

/// Polar grid with jittered radii and angles: a center vertex and `rings`
/// rings of `sectors` vertices, faces counter-clockwise. Draws again until
/// every face has positive area.
inline PlanarDisk random_planar_disk(std::mt19937_64& rng, int rings, int sectors)
{
    for (;;) {
        PlanarDisk d = random_polar_grid(rng, rings, sectors);
        bool ok = true;
        for (const auto& f : d.faces) ok = ok && tri_area(d.coords[f[0]], d.coords[f[1]], d.coords[f[2]]) > 1e-3;
        if (ok) return d;
    }
}

inline std::vector<deq::Vec3> lift(const std::vector<deq::Vec2>& p, double z = 0.0)
{
    std::vector<deq::Vec3> out;
    for (const auto& q : p) out.push_back({q.x(), q.y(), z});
    return out;
}

} // namespace oracle
