#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "scengen/ks.hpp"
#include "scengen/marginals.hpp"

using namespace scengen;

TEST(Marginals, FitSortsAndAssignsPlottingPositions) {
  const std::vector<double> s{3, 1, 2};
  const auto m = EmpiricalMarginal::fit("x", s);
  EXPECT_EQ(m.sorted_values(), (std::vector<double>{1, 2, 3}));
  const auto u = m.plotting_positions();
  EXPECT_DOUBLE_EQ(u[0], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(u[1], 0.5);
  EXPECT_DOUBLE_EQ(u[2], 5.0 / 6.0);
}

TEST(Marginals, TiesAreLegal) {
  const std::vector<double> s{5, 5};
  const auto m = EmpiricalMarginal::fit("x", s);
  EXPECT_EQ(m.sorted_values(), (std::vector<double>{5, 5}));
  EXPECT_DOUBLE_EQ(m.cdf(5), 0.5);
  EXPECT_DOUBLE_EQ(m.quantile(0.3), 5.0);
}

TEST(Marginals, FitErrors) {
  const std::vector<double> one{1};
  EXPECT_THROW(EmpiricalMarginal::fit("x", one), std::invalid_argument);
  const std::vector<double> bad{1, std::nan("")};
  EXPECT_THROW(EmpiricalMarginal::fit("x", bad), std::invalid_argument);
}

TEST(Marginals, CdfInterpolatesAndClamps) {
  const std::vector<double> s{1, 2, 3, 4};
  const auto m = fit_empirical("x", s);
  // Midway between u_2 = 0.375 and u_3 = 0.625.
  EXPECT_DOUBLE_EQ(m.cdf(2.5), 0.5);
  EXPECT_EQ(m.cdf(0.0), 0.0);
  EXPECT_EQ(m.cdf(5.0), 1.0);
  EXPECT_DOUBLE_EQ(m.cdf(1.0), 0.125);
  EXPECT_DOUBLE_EQ(m.cdf(4.0), 0.875);
}

TEST(Marginals, QuantileInvertsAndClamps) {
  const std::vector<double> s{1, 2, 3, 4};
  const auto m = fit_empirical("x", s);
  EXPECT_DOUBLE_EQ(m.quantile(0.5), 2.5);
  EXPECT_EQ(m.quantile(0.0), 1.0);
  EXPECT_EQ(m.quantile(1.0), 4.0);
  EXPECT_EQ(m.quantile(0.1), 1.0);
  EXPECT_THROW(m.quantile(-0.01), std::domain_error);
  EXPECT_THROW(m.quantile(1.01), std::domain_error);
}

TEST(Marginals, TiedBlockUsesMeanPositionAndFlatQuantile) {
  // Positions 0.1, 0.3, 0.5, 0.7, 0.9; the block of 2s spans [0.3, 0.7].
  const std::vector<double> s{1, 2, 2, 2, 3};
  const auto m = fit_empirical("x", s);
  EXPECT_DOUBLE_EQ(m.cdf(2.0), 0.5);
  EXPECT_DOUBLE_EQ(m.cdf_left(2.0), 0.3);
  EXPECT_DOUBLE_EQ(m.cdf_right(2.0), 0.7);
  EXPECT_DOUBLE_EQ(m.quantile(0.3), 2.0);
  EXPECT_DOUBLE_EQ(m.quantile(0.55), 2.0);
  EXPECT_DOUBLE_EQ(m.quantile(0.7), 2.0);
  EXPECT_DOUBLE_EQ(m.quantile(0.2), 1.5);
  EXPECT_DOUBLE_EQ(m.cdf(1.5), 0.2);
}

TEST(Marginals, PitOfOwnDataGivesPlottingPositions) {
  const std::vector<double> s{0.3, -1.2, 4.4, 2.0, 0.9};
  const auto m = fit_empirical("x", s);
  auto u = m.pit(s);
  std::sort(u.begin(), u.end());
  const auto expected = m.plotting_positions();
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_DOUBLE_EQ(u[i], expected[i]);
}

TEST(Marginals, PitBelowSupportIsZero) {
  const std::vector<double> s{1, 2, 3};
  const auto m = fit_empirical("x", s);
  const std::vector<double> c(7, -5.0);
  for (double u : m.pit(c)) EXPECT_EQ(u, 0.0);
}

TEST(Marginals, PitOfNormalDataIsUniform) {
  const auto data = oracle::normal_samples(10'000, 2024);
  const auto m = fit_empirical("z", data);
  const auto u = m.pit(data);
  EXPECT_LT(ks_uniform(u), 0.005);
}

class MarginalProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MarginalProperties, RoundTripsAndMonotonicity) {
  std::mt19937_64 gen(GetParam());
  std::uniform_int_distribution<int> size(2, 300);
  std::lognormal_distribution<double> dist(0.0, 1.5);
  std::vector<double> s(static_cast<std::size_t>(size(gen)));
  for (auto& v : s) v = dist(gen) - 1.0;
  const auto m = fit_empirical("x", s);
  const auto pos = m.plotting_positions();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double u = pos.front() + unit(gen) * (pos.back() - pos.front());
    EXPECT_NEAR(m.cdf(m.quantile(u)), u, 1e-12);
    const double x = m.min() + unit(gen) * (m.max() - m.min());
    EXPECT_NEAR(m.quantile(m.cdf(x)), x, 1e-9 * std::max(1.0, std::fabs(x)));
  }

  double prev_q = m.quantile(0.0), prev_c = m.cdf(m.min() - 1.0);
  for (int k = 1; k <= 2000; ++k) {
    const double u = k / 2000.0;
    const double q = m.quantile(u);
    EXPECT_LE(prev_q, q);
    prev_q = q;
    const double x = m.min() - 0.5 + (m.max() - m.min() + 1.0) * u;
    const double c = m.cdf(x);
    EXPECT_LE(prev_c, c);
    prev_c = c;
  }

  // PIT of own (tie-free) data sits within 1/n of uniform.
  EXPECT_LE(ks_uniform(m.pit(s)), 1.0 / static_cast<double>(s.size()) + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MarginalProperties, ::testing::Range<std::uint64_t>(1, 21));
