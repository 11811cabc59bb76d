#include "ecsqb/states.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "ecsqb/oracle.hpp"

namespace ecsqb {
namespace {

TEST(UvCoefficients, Examples) {
  for (double x : {0.0, 0.7, 3.0}) {
    const auto [u, v] = uv_coefficients(1, x);
    EXPECT_DOUBLE_EQ(u, 1.0);
    EXPECT_DOUBLE_EQ(v, std::exp(-x));
  }
  const auto [u5, v5] = uv_coefficients(5, 16.0);
  EXPECT_NEAR(u5, 5.000002250703494, 1e-15);
  EXPECT_NEAR(v5, 5.626758735962956e-7, 1e-21);
  const auto [u2, v2] = uv_coefficients(2, 0.0);
  EXPECT_DOUBLE_EQ(u2, 4.0);
  EXPECT_DOUBLE_EQ(v2, 2.0);
}

TEST(BDomainLimit, Examples) {
  EXPECT_NEAR(b_domain_limit(1, 60.0), 1.0, 1e-15);
  EXPECT_NEAR(b_domain_limit(4, 60.0), 0.25, 1e-15);
  EXPECT_NEAR(b_domain_limit(2, 1.0), 0.45570174606683077, 1e-15);
}

TEST(BDomainLimit, DegenerateAtZeroAmplitude) {
  for (int d : {1, 2, 7}) EXPECT_THROW(b_domain_limit(d, 0.0), DegenerateError);
  EXPECT_THROW(b_domain_limit(0, 1.0), DomainError);
}

TEST(BDomainLimit, AgreesWithOracleNormalizabilityScan) {
  // The admissible b are exactly those for which the state can be normalized
  // with a real c: <phi|phi> for phi = b sum_j |alpha>_j + c|alpha>_0 must hit
  // 1 for some c. Scan b at the norm-minimizing c = -b v.
  const int d = 2;
  const double x = 1.0;
  const auto coherent = oracle::truncated_coherent(std::sqrt(x), 30);
  auto norm_at = [&](double b, double c) {
    auto s = oracle::detail::single_excitation_state(d, 30, b, c, coherent);
    return oracle::inner_product(s, s).real();
  };
  // min over c of the norm is b^2 (u - v^2); the state is normalizable iff it is <= 1.
  double largest_ok = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double b = 0.7 * i / 2000.0;
    const double v = uv_coefficients(d, x).v;
    if (norm_at(b, -b * v) <= 1.0) largest_ok = b;
  }
  EXPECT_NEAR(largest_ok * largest_ok, b_domain_limit(d, x), 2e-3);
}

TEST(BDomainLimit, NonincreasingInDAboveLogD) {
  for (double x = 3.0; x <= 25.0; x += 0.5) {
    double prev = b_domain_limit(1, x);
    for (int d = 2; d <= 20; ++d) {
      const double next = b_domain_limit(d, x);
      if (x >= std::log(static_cast<double>(d))) {
        EXPECT_LE(next, prev) << "d=" << d << " x=" << x;
      }
      prev = next;
    }
  }
}

TEST(SolveC, Examples) {
  EXPECT_DOUBLE_EQ(solve_c(0.0, 3, 1.0), 1.0);
  const double gamma = b_domain_limit(2, 2.0);
  const double v = uv_coefficients(2, 2.0).v;
  EXPECT_NEAR(solve_c(std::sqrt(gamma), 2, 2.0), -std::sqrt(gamma) * v, 1e-7);
  const double c = solve_c(0.3, 2, 4.0);
  EXPECT_NEAR(c, 0.89279374969485089, 1e-15);
  const auto psi = oracle::build_ecs_state({2, 4.0, 0.3, c, 1});
  EXPECT_NEAR(oracle::inner_product(psi, psi).real(), 1.0, 1e-12);
}

TEST(SolveC, RootBranches) {
  const double larger = solve_c(0.3, 2, 1.0, RootBranch::Larger);
  const double smaller = solve_c(0.3, 2, 1.0, RootBranch::Smaller);
  EXPECT_GT(larger, smaller);
  EXPECT_NEAR(normalization_residual({2, 1.0, 0.3, larger, 1}), 0.0, 1e-14);
  EXPECT_NEAR(normalization_residual({2, 1.0, 0.3, smaller, 1}), 0.0, 1e-14);
}

TEST(SolveC, OutOfDomain) {
  const double gamma = b_domain_limit(2, 1.0);
  EXPECT_THROW(solve_c(std::sqrt(gamma) * 1.01, 2, 1.0), DomainError);
}

TEST(SolveC, NormalizedAcrossDomainByOracle) {
  for (auto [d, x] : {std::pair{1, 0.5}, std::pair{3, 2.0}, std::pair{4, 0.25}}) {
    const double root_gamma = std::sqrt(b_domain_limit(d, x));
    const int cutoff = oracle::auto_cutoff(x, 1);
    for (int i = 0; i < 1000; ++i) {
      const double b = root_gamma * i / 1000.0;
      const auto psi = oracle::build_ecs_state(make_ecs(d, x, b, 1), cutoff);
      ASSERT_NEAR(oracle::inner_product(psi, psi).real(), 1.0, 1e-10) << "d=" << d << " b=" << b;
    }
  }
}

TEST(BStar, Examples) {
  EXPECT_NEAR(b_star(1, 1, 1e9), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(b_star(4, 1, 1.0), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b_star(1, 2, 1.0), std::sqrt(15.0 / 4.0 / 2.0), 1e-15);
}

TEST(BStar, LocatesMinimumOfBoundByScan) {
  // b_star minimizes 1/b^2 + 1/(g - d b^2) on (0, g/d).
  const int d = 4;
  const double g = moment_ratio(1, 1.0);
  double best = 1e300;
  double arg = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double b_sq = g / d * i / 100000.0;
    const double w = 1.0 / b_sq + 1.0 / (g - d * b_sq);
    if (w < best) {
      best = w;
      arg = b_sq;
    }
  }
  EXPECT_NEAR(std::sqrt(arg), b_star(d, 1, 1.0), 1e-4);
}

TEST(DomainGeometry, LargeAmplitudeLimits) {
  // Gamma -> 1/d exponentially; b_star -> 1/sqrt(d + sqrt d) only as
  // sqrt(1 + 1/alpha^2).
  for (int d = 1; d <= 20; ++d)
    for (double x : {36.0, 49.0, 100.0}) {
      const auto geo = domain_geometry(d, 1, x);
      EXPECT_LT(std::abs(geo.gamma_cap - 1.0 / d), 1e-10);
      EXPECT_NEAR(geo.b_star, noon_optimal_b(d) * std::sqrt(1.0 + 1.0 / x), 1e-15);
      EXPECT_TRUE(geo.interior);
      EXPECT_GE(geo.g, 1.0);
    }
}

TEST(MeanTotalPhotons, Examples) {
  EXPECT_EQ(mean_total_photons({3, 0.0, 0.0, 1.0, 1}), 0.0);
  const double b = b_star(5, 1, 16.0);
  const EcsParams p = make_ecs(5, 16.0, b, 1);
  EXPECT_NEAR(mean_total_photons(p), 16.0, 1e-5);
  EXPECT_LT(mean_total_photons(p), 16.0);
}

TEST(MeanTotalPhotons, MatchesOracleNumberOperator) {
  for (auto [d, x, b] : {std::tuple{2, 1.0, 0.4}, std::tuple{1, 0.3, 0.8}, std::tuple{4, 3.0, 0.2}}) {
    const EcsParams p = make_ecs(d, x, b, 1);
    const auto psi = oracle::build_ecs_state(p);
    const double want = mean_total_photons(p);
    EXPECT_NEAR(oracle::total_number_expectation(psi) / want, 1.0, 1e-9);
  }
}

TEST(NoonOptimalB, Examples) {
  EXPECT_NEAR(noon_optimal_b(1), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(noon_optimal_b(4), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(noon_optimal_b(5), 0.37174803446018445, 1e-15);
}

TEST(ValidateEcs, Examples) {
  EXPECT_NO_THROW(validate_ecs({2, 4.0, 0.0, 1.0, 1}));
  const double root_gamma = std::sqrt(b_domain_limit(2, 4.0));
  EXPECT_THROW(validate_ecs({2, 4.0, root_gamma * 1.01, 0.0, 1}), DomainError);
  EXPECT_NO_THROW(validate_ecs({3, 2.0, 0.3, solve_c(0.3, 3, 2.0), 2}));
}

TEST(ValidateEcs, NamesViolatedInvariant) {
  try {
    validate_ecs({2, 1.0, 0.3, 0.5, 1});
    FAIL() << "expected a normalization error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("normalization"), std::string::npos);
  }
  EXPECT_THROW(validate_ecs({2, 1.0, -0.1, 1.0, 1}), DomainError);
  EXPECT_THROW(validate_ecs({2, 1.0, 0.1, 1.0, 0}), DomainError);
  EXPECT_THROW(validate_ecs({2, 0.0, 0.0, 1.0, 1}), DegenerateError);
}

TEST(ValidateNoon, Normalization) {
  const double b = noon_optimal_b(5);
  const NoonParams p = make_noon(5, 10, b, 1);
  EXPECT_NEAR(p.c * p.c, 1.0 - 5.0 * b * b, 1e-15);
  EXPECT_THROW(validate_noon({2, 3, 0.5, 0.5, 1}), DomainError);
  EXPECT_THROW(make_noon(2, 0, 0.5, 1), DomainError);
}

}  // namespace
}  // namespace ecsqb
