#include "scengen/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "scengen/error.hpp"

namespace scengen {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation: length mismatch");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("correlation undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("spearman: at least 3 observations required");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw std::invalid_argument("spearman: non-finite value");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

RankCorrelationMatrix spearman_matrix(const Eigen::MatrixXd& samples, std::vector<std::string> names) {
  const auto n = samples.cols();
  if (static_cast<Eigen::Index>(names.size()) != n)
    throw std::invalid_argument("spearman_matrix: names do not match column count");
  if (samples.rows() < 3) throw DataError("spearman_matrix: at least 3 observations required");

  std::vector<std::vector<double>> ranks(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    std::vector<double> col(samples.col(j).data(), samples.col(j).data() + samples.rows());
    for (double v : col)
      if (!std::isfinite(v)) throw DataError("column '" + names[static_cast<std::size_t>(j)] + "' has non-finite values");
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); }))
      throw DataError("column '" + names[static_cast<std::size_t>(j)] + "' is constant; rank correlation undefined");
    ranks[static_cast<std::size_t>(j)] = average_ranks(col);
  }

  RankCorrelationMatrix r{std::move(names), Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double rho = pearson(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)]);
      r.entries(i, j) = rho;
      r.entries(j, i) = rho;
    }
  return r;
}

RankCorrelationMatrix spearman_matrix(const Dataset& d) {
  if (d.has_missing()) throw DataError("spearman_matrix: dataset has missing values; clean it first");
  return spearman_matrix(d.rows, d.variable_names);
}

double rank_to_copula_sigma(double rho_r) {
  if (!(std::fabs(rho_r) <= 1.0)) throw std::domain_error("rank correlation must lie in [-1, 1]");
  // Exact at the end points, where the sine rounds to 1 - ulp.
  if (rho_r == 1.0 || rho_r == -1.0) return rho_r;
  return 2.0 * std::sin(std::numbers::pi * rho_r / 6.0);
}

double copula_sigma_to_rank(double sigma) {
  if (!(std::fabs(sigma) <= 1.0)) throw std::domain_error("copula correlation must lie in [-1, 1]");
  if (sigma == 1.0 || sigma == -1.0) return sigma;
  return 6.0 / std::numbers::pi * std::asin(sigma / 2.0);
}

void check_correlation_shape(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument(std::string(what) + ": matrix must be square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::fabs(m(i, i) - 1.0) > 1e-12) throw std::invalid_argument(std::string(what) + ": diagonal must be 1");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!(std::fabs(m(i, j)) <= 1.0)) throw std::invalid_argument(std::string(what) + ": entries must lie in [-1, 1]");
      if (std::fabs(m(i, j) - m(j, i)) > 1e-12) throw std::invalid_argument(std::string(what) + ": matrix must be symmetric");
    }
  }
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd nearest_psd(const Eigen::MatrixXd& m) {
  check_correlation_shape(m, "nearest_psd");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("nearest_psd: eigen-decomposition failed");
  if (es.eigenvalues().minCoeff() >= -kPsdTolerance) return m;

  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(kPsdClipFloor);
  Eigen::MatrixXd out = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::VectorXd inv_sd = out.diagonal().cwiseSqrt().cwiseInverse();
  out = inv_sd.asDiagonal() * out * inv_sd.asDiagonal();
  out = 0.5 * (out + out.transpose()).eval();
  out = out.cwiseMax(-1.0).cwiseMin(1.0);
  out.diagonal().setOnes();

  if (min_eigenvalue(out) < -kPsdTolerance) throw std::runtime_error("nearest_psd: repair did not converge");
  return out;
}

CopulaCorrelationMatrix to_copula_matrix(const RankCorrelationMatrix& r) {
  check_correlation_shape(r.entries, "to_copula_matrix");
  CopulaCorrelationMatrix c{r.names, r.entries, false};
  for (Eigen::Index i = 0; i < c.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < c.entries.cols(); ++j)
      c.entries(i, j) = i == j ? 1.0 : rank_to_copula_sigma(r.entries(i, j));
  if (min_eigenvalue(c.entries) < -kPsdTolerance) {
    c.entries = nearest_psd(c.entries);
    c.psd_repaired = true;
  }
  return c;
}

RankCorrelationMatrix to_rank_matrix(const CopulaCorrelationMatrix& c) {
  RankCorrelationMatrix r{c.names, c.entries};
  for (Eigen::Index i = 0; i < r.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < r.entries.cols(); ++j)
      r.entries(i, j) = i == j ? 1.0 : copula_sigma_to_rank(c.entries(i, j));
  return r;
}

}  // namespace scengen
