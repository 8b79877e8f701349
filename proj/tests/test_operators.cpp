#include <doctest.h>

#include "deq/error.hpp"
#include "deq/operators.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace deq;

namespace {

PlanarMap to_map(const oracle::PlanarDisk& d) { return PlanarMap(d.coords, d.faces); }

Eigen::VectorXd quadratic(const PlanarMap& m)
{
    Eigen::VectorXd u(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i) u[i] = m.coords()[i].squaredNorm();
    return u;
}

} // namespace

TEST_CASE("Laplacian of |x|^2 at the center of a square fan")
{
    const PlanarMap m({{0, 0}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    const LaplacianPair lap = cotan_laplacian(m);
    CHECK(lap.L.coeff(0, 1) == doctest::Approx(2.0));
    CHECK(lap.mass[0] == doctest::Approx(8.0 / 3.0));
    CHECK(lap.apply(quadratic(m))[0] == doctest::Approx(6.0));
}

TEST_CASE("Laplacian of |x|^2 at the center of a regular hexagon is 4")
{
    std::vector<Vec2> p{{0, 0}};
    std::vector<Face> f;
    for (int k = 0; k < 6; ++k) p.push_back({std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)});
    for (int k = 0; k < 6; ++k) f.push_back({0, 1 + k, 1 + (k + 1) % 6});
    const PlanarMap m(p, f);
    CHECK(cotan_laplacian(m).apply(quadratic(m))[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cotangent Laplacian matches the dense oracle")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_planar_disk(rng, 2 + trial % 4, 10 + trial);
        const PlanarMap m = to_map(d);
        const LaplacianPair lap = cotan_laplacian(m);
        const auto ref = oracle::laplacian(d.coords, d.faces);
        const int n = m.vertex_count();
        CHECK(lap.L.asymmetry() < 1e-12);
        for (int i = 0; i < n; ++i) {
            CHECK(lap.mass[i] == doctest::Approx(ref.mass[i]).epsilon(1e-12));
            for (int j = 0; j < n; ++j) REQUIRE(std::abs(lap.L.coeff(i, j) - ref.L[i][j]) < 1e-9);
        }
        CHECK(lap.L.row_sums().cwiseAbs().maxCoeff() < 1e-9);
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(n, 3.5);
        CHECK(lap.apply(c).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("Laplacian tolerates a flipped face but not a degenerate one")
{
    const PlanarMap flipped({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 3, 2}});
    const LaplacianPair lap = cotan_laplacian(flipped);
    CHECK(lap.mass[1] == doctest::Approx(1.0 / 3.0));
    const PlanarMap flat({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}});
    CHECK_THROWS_AS(cotan_laplacian(flat), DegenerateFaceError);
}

TEST_CASE("transition matrices are row-stochastic")
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const PlanarMap m = to_map(oracle::random_planar_disk(rng, 3, 12 + trial));
        const TransitionSet t = transitions(m);
        CHECK(t.m_vf.rows() == m.face_count());
        CHECK(t.m_fv.rows() == m.vertex_count());
        for (const SparseMatrix* s : {&t.m_vf, &t.m_fv, &t.w_fv}) {
            const Eigen::VectorXd rs = s->row_sums();
            CHECK((rs.array() - 1.0).abs().maxCoeff() < 1e-12);
            CHECK(s->storage().coeffs().minCoeff() > 0.0);
        }
        for (int f = 0; f < m.face_count(); ++f)
            for (int v : m.faces()[f]) CHECK(t.m_vf.coeff(f, v) == doctest::Approx(1.0 / 3.0));
    }
    CHECK_THROWS_AS(transitions(PlanarMap({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}})), TopologyError);
}

TEST_CASE("face gradient")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = oracle::random_planar_disk(rng, 3, 14);
        const PlanarMap m = to_map(d);
        const Vec2 a(val(rng), val(rng));
        const double b = val(rng);
        Eigen::VectorXd affine(m.vertex_count()), noise(m.vertex_count());
        for (int i = 0; i < m.vertex_count(); ++i) {
            affine[i] = a.dot(m.coords()[i]) + b;
            noise[i] = val(rng);
        }
        for (const Vec2& g : face_gradient(m, affine)) CHECK((g - a).norm() < 1e-12);
        const auto g = face_gradient(m, noise);
        for (int f = 0; f < m.face_count(); ++f) {
            const auto& t = d.faces[f];
            const Vec2 ref = oracle::gradient(d.coords[t[0]], d.coords[t[1]], d.coords[t[2]], noise[t[0]], noise[t[1]],
                                              noise[t[2]]);
            CHECK((g[f] - ref).norm() < 1e-9 * (1.0 + ref.norm()));
        }
        const TransitionSet tr = transitions(m);
        for (const Vec2& v : faces_to_vertices(tr.w_fv, face_gradient(m, affine))) CHECK((v - a).norm() < 1e-12);
    }
}
