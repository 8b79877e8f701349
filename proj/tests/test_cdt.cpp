#include <doctest.h>

#include "deq/cdt.hpp"
#include "deq/error.hpp"
#include "deq/predicates.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace deq;

namespace {

double tri_area(const std::vector<Vec2>& p, const Face& f)
{
    const Vec2 a = p[f[1]] - p[f[0]], b = p[f[2]] - p[f[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

std::set<std::pair<int, int>> edge_set(const std::vector<Face>& tris)
{
    std::set<std::pair<int, int>> e;
    for (const auto& t : tris)
        for (int k = 0; k < 3; ++k) e.insert(std::minmax(t[k], t[(k + 1) % 3]));
    return e;
}

// Brute-force empty-circumcircle check, skipping pairs separated by a constraint
// is not attempted: only used on unconstrained input.
int delaunay_violations(const std::vector<Vec2>& p, const std::vector<Face>& tris)
{
    int bad = 0;
    for (const auto& t : tris)
        for (int i = 0; i < static_cast<int>(p.size()); ++i) {
            if (i == t[0] || i == t[1] || i == t[2]) continue;
            if (predicates::incircle_sign(p[t[0]], p[t[1]], p[t[2]], p[i]) > 0) ++bad;
        }
    return bad;
}

double hull_area_of_square_grid(int n) { return static_cast<double>((n - 1) * (n - 1)); }

} // namespace

TEST_CASE("unit square with center point gives four triangles")
{
    const std::vector<Vec2> p{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto r = constrained_delaunay(p, {});
    CHECK(r.triangles.size() == 4);
    double area = 0.0;
    for (const auto& t : r.triangles) {
        CHECK(tri_area(p, t) > 0.0);
        area += tri_area(p, t);
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("random points: Delaunay, counter-clockwise, covers hull")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Vec2> p;
        for (int i = 0; i < 300; ++i) p.emplace_back(u(rng), u(rng));
        const auto r = constrained_delaunay(p, {});
        for (const auto& t : r.triangles) CHECK(tri_area(p, t) > 0.0);
        CHECK(delaunay_violations(p, r.triangles) == 0);
        // Euler: T = 2n - 2 - h for points in general position.
        const auto edges = edge_set(r.triangles);
        CHECK(static_cast<long>(p.size()) - static_cast<long>(edges.size()) +
                  static_cast<long>(r.triangles.size()) == 1);
    }
}

TEST_CASE("cocircular grid points triangulate without gaps")
{
    const int n = 12;
    std::vector<Vec2> p;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) p.emplace_back(i, j);
    const auto r = constrained_delaunay(p, {});
    CHECK(r.triangles.size() == static_cast<std::size_t>(2 * (n - 1) * (n - 1)));
    double area = 0.0;
    for (const auto& t : r.triangles) area += tri_area(p, t);
    CHECK(area == doctest::Approx(hull_area_of_square_grid(n)));
}

TEST_CASE("constraint edges are present and depth separates regions")
{
    // Annulus: outer 24-gon, inner 8-gon, random points in between.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec2> p;
    std::vector<std::array<int, 2>> seg;
    const int no = 24, ni = 8;
    for (int i = 0; i < no; ++i) {
        const double a = 2 * std::numbers::pi * i / no;
        p.emplace_back(std::cos(a), std::sin(a));
    }
    for (int i = 0; i < ni; ++i) {
        const double a = 2 * std::numbers::pi * i / ni + 0.1;
        p.emplace_back(0.3 * std::cos(a), 0.3 * std::sin(a));
    }
    for (int i = 0; i < no; ++i) seg.push_back({i, (i + 1) % no});
    for (int i = 0; i < ni; ++i) seg.push_back({no + i, no + (i + 1) % ni});
    while (p.size() < 200) {
        const double r = 0.4 + 0.5 * u(rng), a = 2 * std::numbers::pi * u(rng);
        p.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    const auto res = constrained_delaunay(p, seg);
    const auto edges = edge_set(res.triangles);
    for (const auto& [a, b] : seg) CHECK(edges.count(std::minmax(a, b)) == 1);

    double ring_area = 0.0, hole_area = 0.0;
    for (std::size_t i = 0; i < res.triangles.size(); ++i) {
        if (res.depth[i] == 1) ring_area += tri_area(p, res.triangles[i]);
        if (res.depth[i] == 2) hole_area += tri_area(p, res.triangles[i]);
    }
    const double outer = 0.5 * no * std::sin(2 * std::numbers::pi / no);
    const double inner = 0.5 * ni * 0.09 * std::sin(2 * std::numbers::pi / ni);
    CHECK(hole_area == doctest::Approx(inner).epsilon(1e-12));
    CHECK(ring_area == doctest::Approx(outer - inner).epsilon(1e-12));
}

TEST_CASE("long constraint crossing many edges")
{
    std::vector<Vec2> p;
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) p.emplace_back(i + 0.2 * std::sin(7 * i + 3 * j), j + 0.2 * std::cos(5 * i + 11 * j));
    const auto r = constrained_delaunay(p, {{1, 79}});
    double area = 0.0;
    for (const auto& t : r.triangles) {
        CHECK(tri_area(p, t) > 0.0);
        area += tri_area(p, t);
    }
    CHECK(edge_set(r.triangles).count({1, 79}) == 1);
    const auto plain = constrained_delaunay(p, {});
    double plain_area = 0.0;
    for (const auto& t : plain.triangles) plain_area += tri_area(p, t);
    CHECK(area == doctest::Approx(plain_area).epsilon(1e-14));
}

TEST_CASE("constraint through collinear vertices is split at them")
{
    std::vector<Vec2> p;
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) p.emplace_back(i, j);
    // Row y = 4 from (0, 4) to (8, 4) passes through vertices 37..43.
    const auto r = constrained_delaunay(p, {{36, 44}});
    const auto edges = edge_set(r.triangles);
    for (int v = 36; v < 44; ++v) CHECK(edges.count({v, v + 1}) == 1);
    int at_depth_one = 0;
    for (int d : r.depth) at_depth_one += d == 1;
    // An open segment encloses nothing.
    CHECK(at_depth_one == 0);
}

TEST_CASE("duplicate points and crossing segments are rejected")
{
    CHECK_THROWS_AS(constrained_delaunay({{0, 0}, {1, 0}, {0, 1}, {1, 0}}, {}), GeometryError);
    CHECK_THROWS_AS(constrained_delaunay({{0, 0}, {1, 0}, {2, 0}}, {}), GeometryError);
    CHECK_THROWS_AS(constrained_delaunay({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {{0, 1}, {2, 3}}), GeometryError);
}
