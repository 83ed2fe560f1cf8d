#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scengen/error.hpp"
#include "scengen/gaussian_copula.hpp"
#include "scengen/ks.hpp"
#include "scengen/vine.hpp"

using namespace scengen;

namespace {

std::vector<double> col(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

// Edge (a, b | D) with 1-based labels, for comparison with the four-variable figure.
struct Labeled {
  std::size_t a, b;
  std::vector<std::size_t> given;
  bool operator==(const Labeled&) const = default;
};

std::vector<std::vector<Labeled>> labeled(const VineStructure& v) {
  std::vector<std::vector<Labeled>> out;
  for (const auto& tree : v.trees) {
    std::vector<Labeled> t;
    for (const auto& e : tree) {
      std::vector<std::size_t> d;
      for (auto k : e.conditioning) d.push_back(k + 1);
      t.push_back({std::min(e.conditioned.first, e.conditioned.second) + 1,
                   std::max(e.conditioned.first, e.conditioned.second) + 1, d});
    }
    out.push_back(t);
  }
  return out;
}

RankCorrelationMatrix named(const Eigen::MatrixXd& m) {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < m.rows(); ++i) names.push_back("x" + std::to_string(i + 1));
  return {names, m};
}

}  // namespace

TEST(VineStructure, FourVariableDVine) {
  const auto v = dvine_structure(4);
  EXPECT_TRUE(validate_regular_vine(v));
  const std::vector<std::vector<Labeled>> expected{
      {{1, 2, {}}, {2, 3, {}}, {3, 4, {}}},
      {{1, 3, {2}}, {2, 4, {3}}},
      {{1, 4, {2, 3}}},
  };
  EXPECT_EQ(labeled(v), expected);
  EXPECT_TRUE(is_dvine(v));
  EXPECT_FALSE(is_cvine(v));
}

TEST(VineStructure, ProximityViolation) {
  // T_2 joins (1,2) and (3,4), which share no node.
  const auto v = make_vine(4, {{{0, 1}, {1, 2}, {2, 3}}, {{0, 2}, {1, 2}}, {{0, 1}}});
  const auto check = validate_regular_vine(v);
  EXPECT_FALSE(check);
  EXPECT_NE(check.violation.find("proximity"), std::string::npos) << check.violation;
}

TEST(VineStructure, SmallestVine) {
  const auto v = dvine_structure(2);
  EXPECT_TRUE(validate_regular_vine(v));
  ASSERT_EQ(v.trees.size(), 1u);
  EXPECT_EQ(v.trees[0].size(), 1u);
}

TEST(VineStructure, OtherViolations) {
  auto v = dvine_structure(4);
  v.trees[1].pop_back();
  EXPECT_NE(validate_regular_vine(v).violation.find("edges"), std::string::npos);

  v = dvine_structure(4);
  v.trees[1][0].conditioning = {3};
  EXPECT_FALSE(validate_regular_vine(v));

  v = dvine_structure(4);
  v.trees[2][0].conditioning = {0, 1};
  v.trees[2][0].conditioned = {0, 3};
  EXPECT_FALSE(validate_regular_vine(v));

  // T_1 with a cycle is not a tree.
  v = make_vine(4, {{{0, 1}, {1, 2}, {2, 0}}, {{0, 1}, {1, 2}}, {{0, 1}}});
  EXPECT_NE(validate_regular_vine(v).violation.find("spanning"), std::string::npos);

  EXPECT_FALSE(validate_regular_vine(VineStructure{1, {}}));
}

TEST(VineStructure, CVineIsRegularButNotDVine) {
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto v = cvine_structure(n);
    EXPECT_TRUE(validate_regular_vine(v)) << validate_regular_vine(v).violation;
    EXPECT_TRUE(is_cvine(v));
    EXPECT_EQ(is_dvine(v), n == 3);
  }
}

TEST(BuildDVine, EdgesAndSigmas) {
  const auto spec = build_dvine({"1", "2", "3", "4"}, {{0.1, 0.2, 0.3}, {0.4, -0.5}, {0.6}});
  EXPECT_TRUE(validate_regular_vine(spec.structure()));
  EXPECT_EQ(labeled(spec.structure())[1], (std::vector<Labeled>{{1, 3, {2}}, {2, 4, {3}}}));
  EXPECT_DOUBLE_EQ(spec.edge_sigmas[1][1], rank_to_copula_sigma(-0.5));
  EXPECT_DOUBLE_EQ(spec.edge_sigmas[2][0], rank_to_copula_sigma(0.6));
}

TEST(BuildDVine, TwoVariables) {
  const auto spec = build_dvine({"load", "wind"}, {{0.6}});
  EXPECT_EQ(spec.edge_rank_corrs.size(), 1u);
  EXPECT_EQ(spec.edge_rank_corrs[0].size(), 1u);
}

TEST(BuildDVine, Errors) {
  EXPECT_THROW(build_dvine({"a", "b", "c"}, {{0.1, 0.2}, {0.3, 0.4}}), std::invalid_argument);
  EXPECT_THROW(build_dvine({"a", "b", "c"}, {{0.1, 0.2}}), std::invalid_argument);
  EXPECT_THROW(build_dvine({"a", "b"}, {{1.2}}), std::invalid_argument);
  EXPECT_THROW(build_dvine({"a", "a"}, {{0.2}}), std::invalid_argument);
  EXPECT_THROW(build_dvine({"a"}, {}), std::invalid_argument);
}

TEST(BuildDVine, AlwaysValidates) {
  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<std::string> order;
    std::vector<std::vector<double>> corrs;
    for (std::size_t i = 0; i < n; ++i) order.push_back("v" + std::to_string(i));
    for (std::size_t j = 0; j + 1 < n; ++j) corrs.emplace_back(n - 1 - j, 0.1 * static_cast<double>(j % 3));
    EXPECT_TRUE(validate_regular_vine(build_dvine(order, corrs).structure()));
  }
}

TEST(DVineFromRankMatrix, IdentityAndTwoVariables) {
  const auto id = dvine_from_rank_matrix(named(Eigen::MatrixXd::Identity(4, 4)), {"x1", "x2", "x3", "x4"});
  for (const auto& level : id.edge_rank_corrs)
    for (double v : level) EXPECT_EQ(v, 0.0);

  Eigen::MatrixXd two(2, 2);
  two << 1, 0.35, 0.35, 1;
  EXPECT_NEAR(dvine_from_rank_matrix(named(two), {"x1", "x2"}).edge_rank_corrs[0][0], 0.35, 1e-15);
}

TEST(DVineFromRankMatrix, ThreeVariablePartialCorrelation) {
  Eigen::MatrixXd r(3, 3);
  r << 1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1;
  const auto spec = dvine_from_rank_matrix(named(r), {"x1", "x2", "x3"});
  EXPECT_NEAR(spec.edge_sigmas[0][0], 0.5176381, 1e-7);
  EXPECT_NEAR(spec.edge_sigmas[0][1], 0.5176381, 1e-7);
  // (sigma13 - sigma12 sigma23) / (1 - sigma12^2) with sigma13 = 2 sin(pi/24).
  EXPECT_NEAR(spec.edge_sigmas[1][0], -0.009421214920756188, 1e-14);
  EXPECT_NEAR(spec.edge_rank_corrs[1][0], copula_sigma_to_rank(-0.009421214920756188), 1e-14);
}

TEST(DVineFromRankMatrix, MatchesInverseSubmatrixOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto sigma = oracle::random_correlation(5, seed);
    const auto rank = to_rank_matrix({{"x1", "x2", "x3", "x4", "x5"}, sigma, false});
    // Order reversed on odd seeds.
    std::vector<std::string> order{"x1", "x2", "x3", "x4", "x5"};
    if (seed % 2) std::reverse(order.begin(), order.end());
    const auto spec = dvine_from_rank_matrix(rank, order);
    auto pos = [&](std::size_t k) { return static_cast<std::size_t>(order[k][1] - '1'); };
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i + j + 1 < 5; ++i) {
        std::vector<std::size_t> given;
        for (std::size_t k = i + 1; k < i + j + 1; ++k) given.push_back(pos(k));
        const double expected = oracle::partial_correlation(sigma, pos(i), pos(i + j + 1), given);
        EXPECT_NEAR(spec.edge_sigmas[j][i], expected, 1e-10) << "level " << j << " edge " << i;
      }
  }
}

TEST(DVineFromRankMatrix, RejectsNonPsdAndBadOrder) {
  Eigen::MatrixXd r(3, 3);
  r << 1, 0.9, 0.9, 0.9, 1, -0.9, 0.9, -0.9, 1;
  EXPECT_THROW(dvine_from_rank_matrix(named(r), {"x1", "x2", "x3"}), DataError);
  EXPECT_THROW(dvine_from_rank_matrix(named(Eigen::MatrixXd::Identity(3, 3)), {"x1", "x2"}), DataError);
  EXPECT_THROW(dvine_from_rank_matrix(named(Eigen::MatrixXd::Identity(3, 3)), {"x1", "x2", "x2"}), DataError);
  Eigen::MatrixXd degenerate = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_THROW(dvine_from_rank_matrix(named(degenerate), {"x1", "x2", "x3"}), DataError);
}

TEST(SampleDVine, IndependenceCollapseIsBitwise) {
  const auto spec = build_dvine({"a", "b", "c", "d", "e"}, {{0, 0, 0, 0}, {0, 0, 0}, {0, 0}, {0}});
  const SeededRng rng(31);
  EXPECT_EQ(sample_dvine(spec, 5000, rng), raw_uniforms(rng, 5000, 5));
}

TEST(SampleDVine, BivariateReductionIsBitwise) {
  for (double rho : {-1.0, -0.7, 0.0, 0.3, 0.6, 0.95, 1.0}) {
    const SeededRng rng(99);
    EXPECT_EQ(sample_dvine(build_dvine({"a", "b"}, {{rho}}), 4000, rng), sample_bivariate_copula(rho, 4000, rng))
        << rho;
  }
}

TEST(SampleDVine, BivariateRankCorrelation) {
  const auto s = sample_dvine(build_dvine({"a", "b"}, {{0.6}}), 200'000, SeededRng(8));
  EXPECT_NEAR(spearman(col(s, 0), col(s, 1)), 0.6, 0.01);
}

TEST(SampleDVine, ThreeVariablesMatchJointNormalTransform) {
  Eigen::MatrixXd r(3, 3);
  r << 1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1;
  const auto spec = dvine_from_rank_matrix(named(r), {"x1", "x2", "x3"});
  const auto vine = sample_dvine(spec, 200'000, SeededRng(12));
  const auto jnt = joint_normal_transform(GaussianCopulaModel(to_copula_matrix(named(r))), 200'000, SeededRng(13));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = i + 1; j < 3; ++j) {
      const double a = spearman(col(vine, i), col(vine, j));
      EXPECT_NEAR(a, r(i, j), 0.02);
      EXPECT_NEAR(a, spearman(col(jnt, i), col(jnt, j)), 0.02);
    }
}

TEST(SampleDVine, GaussianConsistencyForSeveralOrders) {
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto sigma = oracle::random_correlation(n, 500 + n);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    const auto rank = to_rank_matrix({names, sigma, false});
    std::vector<std::vector<std::string>> orders{names, names};
    std::reverse(orders[1].begin(), orders[1].end());
    std::swap(orders[1][0], orders[1][1]);
    for (const auto& order : orders) {
      const auto s = sample_dvine(dvine_from_rank_matrix(rank, order), 200'000, SeededRng(n));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          // Columns come back in vine order.
          const auto ia = static_cast<Eigen::Index>(order[a][1] - '1');
          const auto ib = static_cast<Eigen::Index>(order[b][1] - '1');
          EXPECT_NEAR(spearman(col(s, static_cast<Eigen::Index>(a)), col(s, static_cast<Eigen::Index>(b))),
                      rank.entries(ia, ib), 0.02);
        }
    }
  }
}

TEST(SampleDVine, ColumnsUniformAndDeterministic) {
  const auto spec = build_dvine({"a", "b", "c", "d"}, {{0.7, -0.4, 0.5}, {0.3, 0.2}, {-0.1}});
  const auto s = sample_dvine(spec, 100'000, SeededRng(4), {1});
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_LT(ks_uniform(col(s, j)), 0.01);
  EXPECT_EQ(s, sample_dvine(spec, 100'000, SeededRng(4), {8}));
  EXPECT_THROW(sample_dvine(spec, 0, SeededRng(4)), std::invalid_argument);
}
