#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scengen/ingest.hpp"

namespace scengen {

/// Spearman correlations on the data scale.
struct RankCorrelationMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd entries;
};

/// Product-moment correlations on the Gaussian-copula scale.
struct CopulaCorrelationMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd entries;
  bool psd_repaired = false;
};

/// Accepted slack on the minimum eigenvalue before a matrix counts as non-PSD.
inline constexpr double kPsdTolerance = 1e-8;
/// Floor applied to negative eigenvalues during repair.
inline constexpr double kPsdClipFloor = 1e-10;

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of two rank vectors (or any two equal-length vectors).
double pearson(std::span<const double> x, std::span<const double> y);

double spearman(std::span<const double> x, std::span<const double> y);

RankCorrelationMatrix spearman_matrix(const Dataset& d);
RankCorrelationMatrix spearman_matrix(const Eigen::MatrixXd& samples, std::vector<std::string> names);

/// sigma = 2 sin(pi * rho_r / 6): rank correlation to Gaussian-copula correlation.
double rank_to_copula_sigma(double rho_r);
/// rho_r = (6 / pi) asin(sigma / 2).
double copula_sigma_to_rank(double sigma);

CopulaCorrelationMatrix to_copula_matrix(const RankCorrelationMatrix& r);
RankCorrelationMatrix to_rank_matrix(const CopulaCorrelationMatrix& c);

/// Eigenvalue-clipping repair of a symmetric unit-diagonal matrix. Matrices
/// whose smallest eigenvalue is at least -kPsdTolerance come back unchanged.
Eigen::MatrixXd nearest_psd(const Eigen::MatrixXd& m);

double min_eigenvalue(const Eigen::MatrixXd& m);

/// Throws std::invalid_argument unless `m` is square, symmetric, unit
/// diagonal with entries in [-1, 1].
void check_correlation_shape(const Eigen::MatrixXd& m, const char* what);

}  // namespace scengen
