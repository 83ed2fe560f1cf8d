#pragma once

#include <functional>
#include <span>

#include "scengen/marginals.hpp"

namespace scengen {

/// One-sample Kolmogorov-Smirnov distance to U(0, 1).
double ks_uniform(std::span<const double> samples);

/// Two-sample distance sup |F_a - F_b| between empirical CDFs.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// One-sample distance to a fitted marginal, exact at the marginal's jumps.
double ks_statistic(std::span<const double> a, const EmpiricalMarginal& m);

/// One-sample distance to a monotone CDF given by its left and right limits.
double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf_left,
                     const std::function<double(double)>& cdf_right);

}  // namespace scengen
