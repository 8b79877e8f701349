#include <doctest.h>

#include "deq/density.hpp"
#include "deq/diffusion.hpp"
#include "deq/error.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace deq;

namespace {

// Quantile by sorting and interpolating between order statistics.
double sorted_quantile(std::vector<double> v, double p)
{
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

} // namespace

TEST_CASE("summary statistics")
{
    const std::vector<double> odd{5, 1, 4, 2, 3};
    CHECK(median(odd) == 3.0);
    const std::vector<double> even{4, 1, 3, 2};
    CHECK(median(even) == 2.5);
    CHECK(interquartile_range(odd) == doctest::Approx(2.0));
    const std::vector<double> two{1, 3};
    CHECK(sd_over_mean(two) == doctest::Approx(0.5));
    CHECK(stopping_functional(Eigen::Vector2d(1.0, 3.0)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(sd_over_mean(std::vector<double>{}), DensityError);
    CHECK_THROWS_AS(sd_over_mean(std::vector<double>{-1.0, 0.5}), DensityError);

    std::mt19937_64 rng(41);
    std::lognormal_distribution<double> val(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> v(1 + trial * 7);
        for (double& x : v) x = val(rng);
        for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0})
            CHECK(quantile(v, p) == doctest::Approx(sorted_quantile(v, p)));
        CHECK(interquartile_range(v) == doctest::Approx(sorted_quantile(v, 0.75) - sorted_quantile(v, 0.25)));
        double mean = 0, var = 0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        for (double x : v) var += (x - mean) * (x - mean);
        CHECK(sd_over_mean(v) == doctest::Approx(std::sqrt(var / static_cast<double>(v.size())) / mean));
    }
}

TEST_CASE("time step")
{
    CHECK(compute_timestep(Eigen::Vector3d(1, 2, 3), 6.0) == doctest::Approx(3.0));
    CHECK(compute_timestep(Eigen::Vector3d(1, 1, 1), 2.5) == doctest::Approx(2.5));
    CHECK(compute_timestep(Eigen::Vector2d(1, 9), 1.0) == doctest::Approx(0.2));
    CHECK_THROWS_AS(compute_timestep(Eigen::Vector2d(0, 1), 1.0), DensityError);
}

TEST_CASE("velocity modes and configuration")
{
    CHECK(parse_velocity_mode("fick") == VelocityMode::fick);
    CHECK(parse_velocity_mode("raw-gradient") == VelocityMode::raw_gradient);
    CHECK(parse_velocity_mode("raw_gradient") == VelocityMode::raw_gradient);
    CHECK_THROWS_AS(parse_velocity_mode("fast"), ConfigError);
    DiffusionConfig c;
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("one diffusion step matches a dense backward-Euler oracle")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    for (int trial = 0; trial < 6; ++trial) {
        const auto d = oracle::random_planar_disk(rng, 3, 10 + trial);
        const int n = static_cast<int>(d.coords.size());
        const int nf = static_cast<int>(d.faces.size());
        for (VelocityMode mode : {VelocityMode::fick, VelocityMode::raw_gradient}) {
            DiffusionState s;
            s.map = PlanarMap(d.coords, d.faces);
            s.density.rho_v.resize(n);
            for (int i = 0; i < n; ++i) s.density.rho_v[i] = val(rng);
            s.density.rho_f = Eigen::VectorXd::Ones(nf);
            s.dt = 0.05 + 0.1 * trial;

            const auto lap = oracle::laplacian(d.coords, d.faces);
            auto a = oracle::zeros(n, n);
            std::vector<double> b(n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) a[i][j] = -s.dt * lap.L[i][j];
                a[i][i] += lap.mass[i];
                b[i] = lap.mass[i] * s.density.rho_v[i];
            }
            const auto rho = oracle::lu_solve(a, b);

            std::vector<Vec2> vsum(n, Vec2::Zero());
            std::vector<double> asum(n, 0.0);
            std::vector<double> rho_f(nf);
            for (int f = 0; f < nf; ++f) {
                const auto& t = d.faces[f];
                const Vec2 g = oracle::gradient(d.coords[t[0]], d.coords[t[1]], d.coords[t[2]], rho[t[0]], rho[t[1]],
                                                rho[t[2]]);
                const double area = oracle::tri_area(d.coords[t[0]], d.coords[t[1]], d.coords[t[2]]);
                for (int v : t) {
                    vsum[v] += area * g;
                    asum[v] += area;
                }
                rho_f[f] = (rho[t[0]] + rho[t[1]] + rho[t[2]]) / 3.0;
            }

            const DiffusionState next = diffusion_step(s, mode);
            CHECK(next.iteration == 1);
            REQUIRE(next.trace.size() == 1u);
            CHECK(next.trace[0] == doctest::Approx(sd_over_mean(rho_f)));
            for (int i = 0; i < n; ++i) {
                CHECK(std::abs(next.density.rho_v[i] - rho[i]) < 1e-10);
                const Vec2 grad = vsum[i] / asum[i];
                const Vec2 vel = mode == VelocityMode::fick ? Vec2(-grad / rho[i]) : grad;
                CHECK((next.map.coords()[i] - (d.coords[i] + s.dt * vel)).norm() < 1e-10);
            }
            for (int f = 0; f < nf; ++f) CHECK(std::abs(next.density.rho_f[f] - rho_f[f]) < 1e-10);
        }
    }
}

TEST_CASE("uniform density is a fixed point")
{
    std::mt19937_64 rng(43);
    const auto d = oracle::random_planar_disk(rng, 3, 14);
    DiffusionState s;
    s.map = PlanarMap(d.coords, d.faces);
    s.density.rho_v = Eigen::VectorXd::Constant(s.map.vertex_count(), 2.5);
    s.density.rho_f = Eigen::VectorXd::Constant(s.map.face_count(), 2.5);
    s.dt = 1.0;
    const DiffusionState next = diffusion_step(s);
    CHECK((next.density.rho_v.array() - 2.5).abs().maxCoeff() < 1e-12);
    for (int i = 0; i < s.map.vertex_count(); ++i) CHECK((next.map.coords()[i] - d.coords[i]).norm() < 1e-12);
    CHECK(next.trace[0] < 1e-12);
}

TEST_CASE("run to convergence on a sea-augmented square")
{
    // 6x6 grid of unit cells with a denser middle.
    std::vector<Vec2> p;
    std::vector<Face> f;
    const int c = 6;
    for (int j = 0; j <= c; ++j)
        for (int i = 0; i <= c; ++i) p.push_back({double(i), double(j)});
    std::vector<double> pop;
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < c; ++i) {
            const int a = j * (c + 1) + i;
            f.push_back({a, a + 1, a + c + 2});
            f.push_back({a, a + c + 2, a + c + 1});
            const double w = (i >= 2 && i < 4 && j >= 2 && j < 4) ? 3.0 : 1.0;
            pop.push_back(0.5 * w);
            pop.push_back(0.5 * w);
        }
    const PlanarMap land(p, f);
    const AugmentedMap aug = build_sea(land);
    Eigen::VectorXd rho(land.face_count());
    for (int k = 0; k < rho.size(); ++k) rho[k] = pop[k] / land.signed_area(k);
    const DensityField field = extend_density(aug, rho);

    DiffusionConfig cfg;
    cfg.epsilon = 1e-3;
    const DiffusionResult r = run_to_convergence(aug, field, cfg);
    CHECK(r.report.converged);
    CHECK(r.report.iterations >= 1);
    CHECK(r.report.trace.back() < cfg.epsilon);
    CHECK(r.report.initial_functional == doctest::Approx(stopping_functional(field.rho_f)));
    CHECK(r.report.dt == doctest::Approx(compute_timestep(field.rho_f, 36.0)));

    double area = 0;
    for (int k = 0; k < land.face_count(); ++k) area += r.map.signed_area(k);
    CHECK(area == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(r.report.flipped_land_faces == 0);

    // The dense middle expands: its share of the area moves towards its share
    // of the population.
    double middle = 0;
    for (int k = 0; k < land.face_count(); ++k)
        if (pop[k] > 1.0) middle += r.map.signed_area(k);
    CHECK(middle > 4.0);
    CHECK(r.report.land_sd_over_mean < stopping_functional(rho));

    const auto dens = normalized_land_density(r.map, pop);
    REQUIRE(dens.size() == r.report.land_density.size());
    for (std::size_t k = 0; k < dens.size(); ++k) CHECK(dens[k] == doctest::Approx(r.report.land_density[k]));

    cfg.max_iterations = 0;
    const DiffusionResult capped = run_to_convergence(aug, field, cfg);
    CHECK_FALSE(capped.report.converged);
    CHECK(capped.report.iterations == 0);
}

TEST_CASE("already uniform input needs no iterations")
{
    const PlanarMap land({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
    const AugmentedMap aug = build_sea(land);
    const DensityField field = extend_density(aug, Eigen::Vector2d(1.0, 1.0));
    const DiffusionResult r = run_to_convergence(aug, field);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 0);
    CHECK(r.report.rescale_factor == doctest::Approx(1.0));
    for (int v = 0; v < 4; ++v) CHECK(r.map.coords()[v] == land.coords()[v]);
}
