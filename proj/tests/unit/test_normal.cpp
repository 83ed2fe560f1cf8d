#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scengen/normal.hpp"

using namespace scengen;

TEST(NormalCdf, Examples) {
  EXPECT_EQ(std_normal_cdf(0.0), 0.5);
  // Quadrature oracle and its frozen value 0.975000000903557...
  EXPECT_NEAR(std_normal_cdf(1.959964), oracle::normal_cdf(1.959964), 1e-13);
  EXPECT_NEAR(std_normal_cdf(1.959964), 0.975, 1e-6);
  EXPECT_NEAR(std_normal_cdf(1.959964), 0.9750000009035576, 1e-13);
  EXPECT_NEAR(std_normal_cdf(0.7) + std_normal_cdf(-0.7), 1.0, 1e-15);
}

TEST(NormalCdf, AgreesWithQuadratureOnGrid) {
  for (double z = -8.0; z <= 8.0; z += 0.25) EXPECT_NEAR(std_normal_cdf(z), oracle::normal_cdf(z), 1e-12) << z;
}

TEST(NormalQuantile, Examples) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  EXPECT_NEAR(std_normal_quantile(0.975), 1.959964, 1e-5);
  EXPECT_NEAR(std_normal_quantile(0.975), oracle::normal_quantile(0.975), 1e-9);
  EXPECT_THROW(std_normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(std_normal_quantile(1.0), std::domain_error);
  EXPECT_THROW(std_normal_quantile(std::nan("")), std::domain_error);
}

TEST(NormalQuantile, InvertsCdf) {
  for (int k = 1; k < 1000; ++k) {
    const double p = k / 1000.0;
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-12) << p;
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5}) {
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)) / p, 1.0, 1e-10) << p;
  }
  for (double p : {1e-10, 1e-5, 0.01}) EXPECT_NEAR(std_normal_quantile(1.0 - p), -std_normal_quantile(p), 1e-6) << p;
}

TEST(NormalQuantile, AgreesWithBisectionOracle) {
  for (double p : {0.001, 0.02, 0.1, 0.3, 0.6, 0.8, 0.95, 0.999})
    EXPECT_NEAR(std_normal_quantile(p), oracle::normal_quantile(p), 1e-9) << p;
}
