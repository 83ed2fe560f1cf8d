#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scengen {

/// Empirical one-dimensional distribution backed by the sorted fitting sample.
///
/// The CDF interpolates linearly between plotting positions u_i = (i - 0.5)/n
/// and is clamped outside the observed range: values below the minimum map to
/// 0, values above the maximum to 1. A block of tied sample values occupies
/// the plotting-position interval [first, last] of the block; the CDF at the
/// tied value itself is the block mean, and the quantile is flat across the
/// whole block. Without ties the CDF and quantile are exact inverses on
/// [u_1, u_n].
class EmpiricalMarginal {
 public:
  static EmpiricalMarginal fit(std::string name, std::span<const double> samples);

  const std::string& name() const { return name_; }
  const std::vector<double>& sorted_values() const { return sorted_; }
  std::vector<double> plotting_positions() const;
  std::size_t size() const { return sorted_.size(); }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }

  double cdf(double x) const;
  /// One-sided limits of the CDF, for exact supremum distances.
  double cdf_left(double x) const;
  double cdf_right(double x) const;
  double quantile(double u) const;
  std::vector<double> pit(std::span<const double> samples) const;

 private:
  EmpiricalMarginal() = default;

  // Interpolation segment between distinct values k and k+1, or -1 / K-1
  // when x is outside; `exact` reports x == knots_[k].
  std::ptrdiff_t locate(double x, bool& exact) const;

  std::string name_;
  std::vector<double> sorted_;
  // One knot per distinct value: its plotting-position block [lo, hi].
  std::vector<double> knots_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Free-function spelling of the marginal operations.
inline EmpiricalMarginal fit_empirical(std::string name, std::span<const double> samples) {
  return EmpiricalMarginal::fit(std::move(name), samples);
}

}  // namespace scengen
