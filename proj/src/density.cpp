#include "deq/density.hpp"

#include "deq/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace deq {

double quantile(std::span<const double> values, double p)
{
    if (values.empty()) throw DensityError("quantile of an empty set");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double interquartile_range(std::span<const double> values)
{
    return quantile(values, 0.75) - quantile(values, 0.25);
}

double sd_over_mean(std::span<const double> values)
{
    if (values.empty()) throw DensityError("dispersion of an empty set");
    double mean = 0.0;
    for (double x : values) mean += x;
    mean /= static_cast<double>(values.size());
    if (!(mean > 0.0)) throw DensityError("dispersion needs a positive mean");
    double var = 0.0;
    for (double x : values) var += (x - mean) * (x - mean);
    var /= static_cast<double>(values.size());
    return std::sqrt(var) / mean;
}

} // namespace deq
