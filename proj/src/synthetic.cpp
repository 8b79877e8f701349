#include "deq/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace deq::synthetic {

TriMesh height_field(int cells, double x0, double x1, double y0, double y1,
                     const std::function<double(double, double)>& height)
{
    const int n = cells + 1;
    std::vector<Vec3> v;
    v.reserve(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = x0 + (x1 - x0) * i / cells;
            const double y = y0 + (y1 - y0) * j / cells;
            v.emplace_back(x, y, height(x, y));
        }
    std::vector<Face> f;
    f.reserve(2 * cells * cells);
    for (int j = 0; j < cells; ++j)
        for (int i = 0; i < cells; ++i) {
            const int a = j * n + i, b = a + 1, c = a + n + 1, d = a + n;
            f.push_back({a, b, c});
            f.push_back({a, c, d});
        }
    return TriMesh(std::move(v), std::move(f));
}

TriMesh grid_square(int cells, double spacing)
{
    const double side = spacing * cells;
    return height_field(cells, 0.0, side, 0.0, side, [](double, double) { return 0.0; });
}

double peaks(double x, double y)
{
    return 3.0 * (1 - x) * (1 - x) * std::exp(-x * x - (y + 1) * (y + 1)) -
           10.0 * (x / 5 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
           std::exp(-(x + 1) * (x + 1) - y * y) / 3.0;
}

TriMesh peaks_surface(int cells)
{
    return height_field(cells, -3.0, 3.0, -3.0, 3.0, [](double x, double y) { return peaks(x, y) / 3.0; });
}

TriMesh gaussian_bump(int cells)
{
    return height_field(cells, 0.0, 1.0, 0.0, 1.0, [](double x, double y) {
        return 0.5 * std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.05);
    });
}

TriMesh random_disk(std::mt19937_64& rng, int rings, int sectors)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int modes = 4;
    double amp[modes], phase[modes], hx[3], hy[3], hz[3];
    for (int k = 0; k < modes; ++k) {
        amp[k] = 0.25 * u(rng) / (k + 1);
        phase[k] = 2 * std::numbers::pi * u(rng);
    }
    for (int k = 0; k < 3; ++k) {
        hx[k] = 2.0 * u(rng) - 1.0;
        hy[k] = 2.0 * u(rng) - 1.0;
        hz[k] = 1.2 * (u(rng) - 0.5);
    }
    auto rim = [&](double t) {
        double r = 1.0;
        for (int k = 0; k < modes; ++k) r += amp[k] * std::cos((k + 2) * t + phase[k]);
        return r;
    };
    auto height = [&](double x, double y) {
        double z = 0.0;
        for (int k = 0; k < 3; ++k) z += hz[k] * std::exp(-((x - hx[k]) * (x - hx[k]) + (y - hy[k]) * (y - hy[k])));
        return z;
    };

    std::vector<Vec3> v;
    v.emplace_back(0.0, 0.0, height(0.0, 0.0));
    for (int r = 1; r <= rings; ++r)
        for (int s = 0; s < sectors; ++s) {
            // Interior rings get an angular jitter; the rim stays on its curve.
            const double jitter = r < rings ? 0.3 * (u(rng) - 0.5) : 0.0;
            const double t = 2 * std::numbers::pi * (s + jitter) / sectors;
            const double rad = rim(t) * r / rings;
            const double x = rad * std::cos(t), y = rad * std::sin(t);
            v.emplace_back(x, y, height(x, y));
        }
    auto id = [&](int r, int s) { return 1 + (r - 1) * sectors + ((s % sectors) + sectors) % sectors; };
    std::vector<Face> f;
    for (int s = 0; s < sectors; ++s) f.push_back({0, id(1, s), id(1, s + 1)});
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < sectors; ++s) {
            f.push_back({id(r, s), id(r + 1, s), id(r + 1, s + 1)});
            f.push_back({id(r, s), id(r + 1, s + 1), id(r, s + 1)});
        }
    return TriMesh(std::move(v), std::move(f));
}

} // namespace deq::synthetic
