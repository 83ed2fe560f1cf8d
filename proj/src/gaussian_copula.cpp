#include "scengen/gaussian_copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "scengen/normal.hpp"

namespace scengen {

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix must be square");
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > kCholeskyPivotFloor))
      throw std::domain_error("cholesky: matrix is not positive definite (pivot " + std::to_string(pivot) +
                              " at index " + std::to_string(j) + "); apply nearest_psd repair first");
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }
  return l;
}

namespace detail {

double clamp_open(double p) noexcept {
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - 0x1.0p-53;
  return std::clamp(p, lo, hi);
}

double h_gauss(double u, double v, double rho) noexcept {
  if (rho == 0.0) return u;
  rho = std::clamp(rho, -1.0 + kRhoClamp, 1.0 - kRhoClamp);
  const double z = (std_normal_quantile(u) - rho * std_normal_quantile(v)) / std::sqrt(1.0 - rho * rho);
  return clamp_open(std_normal_cdf(z));
}

double h_gauss_inv(double p, double v, double rho) noexcept {
  if (rho == 0.0) return p;
  if (rho == 1.0) return v;
  if (rho == -1.0) return clamp_open(1.0 - v);
  rho = std::clamp(rho, -1.0 + kRhoClamp, 1.0 - kRhoClamp);
  const double z = std::sqrt(1.0 - rho * rho) * std_normal_quantile(p) + rho * std_normal_quantile(v);
  return clamp_open(std_normal_cdf(z));
}

}  // namespace detail

namespace {

void check_h_args(double a, double v, double rho, const char* what) {
  if (!(a > 0.0 && a < 1.0) || !(v > 0.0 && v < 1.0))
    throw std::domain_error(std::string(what) + ": probability arguments must lie in (0, 1)");
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error(std::string(what) + ": rho must lie in [-1, 1]");
}

}  // namespace

double h_gauss(double u, double v, double rho) {
  check_h_args(u, v, rho, "h_gauss");
  return detail::h_gauss(u, v, rho);
}

double h_gauss_inv(double p, double v, double rho) {
  check_h_args(p, v, rho, "h_gauss_inv");
  return detail::h_gauss_inv(p, v, rho);
}

GaussianCopulaModel::GaussianCopulaModel(CopulaCorrelationMatrix copula_matrix)
    : matrix_(std::move(copula_matrix)) {
  check_correlation_shape(matrix_.entries, "GaussianCopulaModel");
  factor_ = cholesky(matrix_.entries);
}

Eigen::MatrixXd raw_uniforms(const SeededRng& rng, std::size_t count, std::size_t width,
                             const SamplingOptions& opts) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(width));
  detail::parallel_rows(count, opts, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (std::size_t c = 0; c < width; ++c)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rng.uniform(r * width + c);
  });
  return out;
}

Eigen::MatrixXd sample_bivariate_copula(double rho_r, std::size_t count, const SeededRng& rng,
                                        const SamplingOptions& opts) {
  if (count == 0) throw std::invalid_argument("sample_bivariate_copula: count must be positive");
  const double sigma = rank_to_copula_sigma(rho_r);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), 2);
  detail::parallel_rows(count, opts, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      const double u1 = rng.uniform(2 * r);
      const double ur2 = rng.uniform(2 * r + 1);
      out(row, 0) = u1;
      out(row, 1) = detail::h_gauss_inv(ur2, u1, sigma);
    }
  });
  return out;
}

Eigen::MatrixXd joint_normal_transform(const GaussianCopulaModel& model, std::size_t count, const SeededRng& rng,
                                       const SamplingOptions& opts) {
  if (count == 0) throw std::invalid_argument("joint_normal_transform: count must be positive");
  const std::size_t n = model.dimension();
  const Eigen::MatrixXd& l = model.cholesky_factor();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
  detail::parallel_rows(count, opts, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t c = 0; c < n; ++c) z(static_cast<Eigen::Index>(c)) = std_normal_quantile(rng.uniform(r * n + c));
      const auto row = static_cast<Eigen::Index>(r);
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        // Explicit loop keeps the summation order fixed across builds.
        double y = 0.0;
        for (Eigen::Index k = 0; k <= i; ++k) y += l(i, k) * z(k);
        out(row, i) = detail::clamp_open(std_normal_cdf(y));
      }
    }
  });
  return out;
}

}  // namespace scengen
