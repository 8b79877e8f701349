#include <doctest.h>

#include "deq/error.hpp"
#include "deq/predicates.hpp"
#include "deq/sea.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace deq;

namespace {

PlanarMap random_land(std::mt19937_64& rng, int rings = 3, int sectors = 16)
{
    auto d = oracle::random_planar_disk(rng, rings, sectors);
    for (auto& p : d.coords) p = Vec2(3.0 * p.x() + 10.0, 2.0 * p.y() - 4.0);
    return PlanarMap(d.coords, d.faces);
}

std::vector<int> loop_of(const PlanarMap& m) { return boundary_loop(m.faces(), m.vertex_count()); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b)
{
    const Vec2 d = b - a;
    const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

// Crossing-number test.
bool inside(const Vec2& p, const std::vector<Vec2>& poly)
{
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 &a = poly[i], &b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
            in = !in;
    }
    return in;
}

std::set<std::pair<int, int>> undirected_edges(const std::vector<Face>& faces)
{
    std::set<std::pair<int, int>> e;
    for (const auto& t : faces)
        for (int k = 0; k < 3; ++k) e.insert(std::minmax(t[k], t[(k + 1) % 3]));
    return e;
}

} // namespace

TEST_CASE("sea configuration bounds")
{
    SeaConfig c;
    CHECK_NOTHROW(c.validate());
    c.shrink_radius = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SeaConfig{};
    c.truncate_radius = 0.9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SeaConfig{};
    c.gap_spacing = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("normalization centers the land and fits it in the shrink radius")
{
    std::mt19937_64 rng(31);
    const PlanarMap land = random_land(rng);
    const NormalizedLand n = normalize_into_disk(land, SeaConfig{});
    CHECK(land_centroid(n.map).norm() < 1e-12);
    double rmax = 0;
    for (const auto& p : n.map.coords()) rmax = std::max(rmax, p.norm());
    CHECK(rmax == doctest::Approx(0.7));
    for (int i = 0; i < land.vertex_count(); ++i)
        CHECK(((land.coords()[i] - n.center) * n.land_scale - n.map.coords()[i]).norm() < 1e-12);
}

TEST_CASE("gap points")
{
    std::mt19937_64 rng(32);
    const NormalizedLand n = normalize_into_disk(random_land(rng), SeaConfig{});
    const double l = 0.1;
    const GapPoints g = generate_gap_points(n.map, l);
    REQUIRE(g.ring.size() == 63u);
    for (std::size_t k = 0; k < g.ring.size(); ++k) {
        const double t = 2 * std::numbers::pi * static_cast<double>(k) / 63.0;
        CHECK((g.ring[k] - Vec2(std::cos(t), std::sin(t))).norm() < 1e-12);
    }
    std::vector<Vec2> poly;
    for (int v : loop_of(n.map)) poly.push_back(n.map.coords()[v]);
    CHECK(g.interior.size() > 100u);
    for (const Vec2& p : g.interior) {
        CHECK(p.norm() <= 1.0 - l / 2 + 1e-12);
        CHECK_FALSE(inside(p, poly));
        double dmin = 1e9;
        for (std::size_t i = 0; i < poly.size(); ++i)
            dmin = std::min(dmin, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
        CHECK(dmin >= l / 2 - 1e-12);
    }
    CHECK_THROWS_AS(generate_gap_points(n.map, 3.0), ConfigError);
    CHECK_THROWS_AS(generate_gap_points(n.map, 0.0), ConfigError);
}

TEST_CASE("gap triangulation keeps land and constraints")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 5; ++trial) {
        const PlanarMap land = random_land(rng, 2 + trial % 3, 10 + 3 * trial);
        const NormalizedLand n = normalize_into_disk(land, SeaConfig{});
        const double l = mean_edge_length(n.map);
        const GapPoints g = generate_gap_points(n.map, l);
        const DiskTriangulation d = triangulate_gap(n.map, g);

        CHECK(d.map.vertex_count() ==
              n.map.vertex_count() + static_cast<int>(g.interior.size() + g.ring.size()));
        for (int f = 0; f < land.face_count(); ++f) {
            CHECK(d.map.faces()[f] == land.faces()[f]);
            CHECK(d.map.is_land(f));
        }
        CHECK(d.map.land_face_count() == land.face_count());
        CHECK(check_no_flips(d.map) == 0);
        CHECK(validate_disk_topology(d.map).is_disk());

        const auto edges = undirected_edges(d.map.faces());
        const auto loop = loop_of(n.map);
        for (std::size_t k = 0; k < loop.size(); ++k)
            CHECK(edges.count(std::minmax(loop[k], loop[(k + 1) % loop.size()])));
        for (std::size_t k = 0; k < d.ring.size(); ++k)
            CHECK(edges.count(std::minmax(d.ring[k], d.ring[(k + 1) % d.ring.size()])));

        double area = 0;
        for (int f = 0; f < d.map.face_count(); ++f) area += d.map.signed_area(f);
        const double m = static_cast<double>(g.ring.size());
        CHECK(area == doctest::Approx(0.5 * m * std::sin(2 * std::numbers::pi / m)).epsilon(1e-12));
    }
}

TEST_CASE("reflection")
{
    std::mt19937_64 rng(34);
    const NormalizedLand n = normalize_into_disk(random_land(rng), SeaConfig{});
    const GapPoints g = generate_gap_points(n.map, mean_edge_length(n.map));
    const DiskTriangulation d = triangulate_gap(n.map, g);
    const GluedMap glued = reflect_glue(d);

    SUBCASE("mirror vertices are inversions of their sources")
    {
        int mirrored = 0;
        for (int v = 0; v < glued.map.vertex_count(); ++v) {
            const int s = glued.mirror_source[v];
            if (s < 0) continue;
            ++mirrored;
            const Vec2 z = d.map.coords()[s];
            CHECK((glued.map.coords()[v] - z / z.squaredNorm()).norm() < 1e-12 * (1.0 + 1.0 / z.squaredNorm()));
        }
        CHECK(mirrored == d.map.vertex_count() - static_cast<int>(d.ring.size()) -
                              static_cast<int>(std::count_if(d.map.coords().begin(), d.map.coords().end(),
                                                             [](const Vec2& z) { return z.norm() < 1e-6; })));
    }
    SUBCASE("mirror faces flip exactly when the source circumcircle holds the origin")
    {
        const Vec2 origin = Vec2::Zero();
        const int base = d.map.face_count();
        REQUIRE(glued.map.face_count() >= base);
        for (int f = 0; f < base; ++f) CHECK(glued.map.signed_area(f) > 0.0);
        // Mirror faces are appended in source order, skipping sources that
        // touch an unmirrored vertex.
        int g = base;
        for (int f = 0; f < base; ++f) {
            const auto& t = d.map.faces()[f];
            const auto& c = d.map.coords();
            if (c[t[0]].norm() < 1e-6 || c[t[1]].norm() < 1e-6 || c[t[2]].norm() < 1e-6) continue;
            const bool holds = predicates::incircle_sign(c[t[0]], c[t[1]], c[t[2]], origin) > 0;
            CHECK((glued.map.signed_area(g) < 0.0) == holds);
            ++g;
        }
        CHECK(g == glued.map.face_count());
    }
    SUBCASE("glued map is a consistently oriented disk")
    {
        CHECK(glued.ring == d.ring);
        CHECK(glued.map.land_face_count() == n.map.face_count());
        const auto diag = validate_disk_topology(glued.map);
        CHECK(diag.inconsistent_orientation_count == 0);
        CHECK(diag.nonmanifold_edge_count == 0);
    }
    SUBCASE("a point at radius one half goes to radius two")
    {
        const PlanarMap tiny({{0.5, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}},
                             {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}}, {1, 0, 0, 0});
        const GluedMap gt = reflect_glue(DiskTriangulation{tiny, {4, 1, 2, 3}});
        REQUIRE(gt.map.vertex_count() == 6);
        CHECK((gt.map.coords()[5] - Vec2(2.0, 0.0)).norm() < 1e-15);
        CHECK(gt.mirror_source[5] == 0);
        CHECK(gt.map.face_count() == 8);
        CHECK(check_no_flips(gt.map) == 2);
    }
}

TEST_CASE("full sea construction")
{
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 5; ++trial) {
        const PlanarMap land = random_land(rng, 2 + trial % 3, 12 + 2 * trial);
        SeaConfig cfg;
        cfg.truncate_radius = 3.0 + trial;
        const AugmentedMap aug = build_sea(land, cfg);
        CHECK(validate_disk_topology(aug.map).is_disk());
        CHECK(check_no_flips(aug.map) == 0);
        CHECK(aug.land_vertex_count == land.vertex_count());
        CHECK(aug.land_face_count == land.face_count());
        CHECK(aug.map.land_face_count() == land.face_count());
        for (int v = 0; v < land.vertex_count(); ++v) CHECK(aug.map.coords()[v] == land.coords()[v]);
        for (int f = 0; f < land.face_count(); ++f) CHECK(aug.map.faces()[f] == land.faces()[f]);
        double rmax = 0;
        for (const auto& p : aug.map.coords()) rmax = std::max(rmax, aug.to_normalized(p).norm());
        CHECK(rmax <= cfg.truncate_radius + 1e-9);
        CHECK(rmax > 1.5);
        for (int v : aug.circle_ring) CHECK(aug.to_normalized(aug.map.coords()[v]).norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("density extension")
{
    std::mt19937_64 rng(36);
    const PlanarMap land = random_land(rng);
    const AugmentedMap aug = build_sea(land);
    Eigen::VectorXd rho(land.face_count());
    std::uniform_real_distribution<double> val(0.5, 3.0);
    for (int f = 0; f < rho.size(); ++f) rho[f] = val(rng);

    const DensityField d = extend_density(aug, rho);
    for (int f = 0; f < aug.map.face_count(); ++f)
        CHECK(d.rho_f[f] == doctest::Approx(f < land.face_count() ? rho[f] : rho.mean()).epsilon(1e-14));
    std::vector<double> sum(aug.map.vertex_count(), 0.0);
    std::vector<int> count(aug.map.vertex_count(), 0);
    for (int f = 0; f < aug.map.face_count(); ++f)
        for (int v : aug.map.faces()[f]) sum[v] += d.rho_f[f], ++count[v];
    for (int v = 0; v < aug.map.vertex_count(); ++v) CHECK(d.rho_v[v] == doctest::Approx(sum[v] / count[v]));

    const DensityField w = extend_density(aug, rho, true);
    double pop = 0, area = 0;
    for (int f = 0; f < land.face_count(); ++f) pop += rho[f] * land.signed_area(f), area += land.signed_area(f);
    CHECK(w.rho_f[aug.map.face_count() - 1] == doctest::Approx(pop / area));

    rho[0] = 0.0;
    CHECK_THROWS_AS(extend_density(aug, rho), DensityError);
    CHECK_THROWS_AS(extend_density(aug, Eigen::VectorXd::Ones(3)), DensityError);
}

TEST_CASE("coarse land: mirrored faces around infinity are removed")
{
    const PlanarMap triangle({{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.7}}, {{0, 1, 2}});
    const AugmentedMap aug = build_sea(triangle);
    CHECK(check_no_flips(aug.map) == 0);
    CHECK(validate_disk_topology(aug.map).is_disk());
    CHECK(aug.map.land_face_count() == 1);

    const PlanarMap fan({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    const AugmentedMap aug2 = build_sea(fan);
    CHECK(check_no_flips(aug2.map) == 0);
    CHECK(validate_disk_topology(aug2.map).is_disk());
}
