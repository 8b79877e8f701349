#pragma once

// Density fields and the summary statistics used for stopping and reporting.

#include <Eigen/Core>

#include <span>

namespace deq {

struct DensityField {
    Eigen::VectorXd rho_f; ///< per face
    Eigen::VectorXd rho_v; ///< per vertex
};

/// Median with the average of the two middle values for even counts.
double median(std::span<const double> values);

/// Interquartile range Q3 - Q1, quartiles by linear interpolation between
/// order statistics (position p·(n-1)).
double interquartile_range(std::span<const double> values);

double quantile(std::span<const double> values, double p);

/// Population standard deviation divided by the mean. Throws DensityError for
/// an empty input or a non-positive mean.
double sd_over_mean(std::span<const double> values);

inline double stopping_functional(const Eigen::VectorXd& rho_f)
{
    return sd_over_mean(std::span<const double>(rho_f.data(), static_cast<std::size_t>(rho_f.size())));
}

} // namespace deq
