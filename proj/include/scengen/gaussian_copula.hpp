#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "scengen/dependence.hpp"
#include "scengen/parallel.hpp"
#include "scengen/rng.hpp"

namespace scengen {

/// Smallest Cholesky pivot accepted before the matrix is declared non-PSD.
inline constexpr double kCholeskyPivotFloor = 1e-12;
/// |rho| is clamped to 1 - kRhoClamp inside the h-functions.
inline constexpr double kRhoClamp = 1e-12;

/// Lower-triangular L with L * L^T = m. Throws std::domain_error when a pivot
/// falls to kCholeskyPivotFloor or below.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m);

/// Conditional CDF of U given V = v under the Gaussian copula with
/// correlation rho: Phi((Phi^-1(u) - rho Phi^-1(v)) / sqrt(1 - rho^2)).
double h_gauss(double u, double v, double rho);

/// Inverse of h_gauss in its first argument. rho = +1 / -1 give the
/// comonotone (v) / countermonotone (1 - v) copy.
double h_gauss_inv(double p, double v, double rho);

namespace detail {
// Unchecked variants used by the samplers; arguments are assumed to be in
// (0, 1) and results are kept strictly inside it.
double h_gauss(double u, double v, double rho) noexcept;
double h_gauss_inv(double p, double v, double rho) noexcept;
double clamp_open(double p) noexcept;
}  // namespace detail

class GaussianCopulaModel {
 public:
  explicit GaussianCopulaModel(CopulaCorrelationMatrix copula_matrix);

  const CopulaCorrelationMatrix& copula_matrix() const { return matrix_; }
  const Eigen::MatrixXd& cholesky_factor() const { return factor_; }
  std::size_t dimension() const { return static_cast<std::size_t>(factor_.rows()); }

 private:
  CopulaCorrelationMatrix matrix_;
  Eigen::MatrixXd factor_;
};

/// The raw independent uniforms every sampler starts from: entry (r, c) is
/// rng.uniform(r * width + c).
Eigen::MatrixXd raw_uniforms(const SeededRng& rng, std::size_t count, std::size_t width,
                             const SamplingOptions& opts = {});

/// Two-variable copula sampling by conditional inversion. Column 0 is the
/// first raw uniform; column 1 inverts the conditional copula CDF at the
/// second raw uniform. rho_r is on the rank scale.
Eigen::MatrixXd sample_bivariate_copula(double rho_r, std::size_t count, const SeededRng& rng,
                                        const SamplingOptions& opts = {});

/// n-dimensional Gaussian copula sample: z = Phi^-1(raw uniforms), y = L z,
/// output Phi(y).
Eigen::MatrixXd joint_normal_transform(const GaussianCopulaModel& model, std::size_t count, const SeededRng& rng,
                                       const SamplingOptions& opts = {});

}  // namespace scengen
