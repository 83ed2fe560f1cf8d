#pragma once

namespace scengen {

double std_normal_pdf(double z);

/// Standard normal CDF, absolute error below 1e-15 over the whole line.
double std_normal_cdf(double z);

/// Inverse standard normal CDF for p in (0, 1); throws std::domain_error
/// otherwise.
double std_normal_quantile(double p);

}  // namespace scengen
