#include "ecsqb/bounds.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace ecsqb {
namespace {

double core(int d) {
  const double sd = std::sqrt(static_cast<double>(d));
  return d * (sd + 1.0) * (sd + 1.0);
}

TEST(EcsLinear, Examples) {
  EXPECT_NEAR(qcrb_ecs_linear(5, 4.0).value, 0.52360679774997897, 1e-15);
  EXPECT_NEAR(qcrb_ecs_linear(5, 4.0).value, core(5) / 100.0, 1e-15);
  EXPECT_NEAR(qcrb_ecs_linear(1, 1.0).value, 0.25, 1e-15);
  EXPECT_EQ(qcrb_ecs_linear(5, 4.0).regime, Regime::Interior);
}

TEST(EcsLinear, RejectsClampedRegion) {
  EXPECT_THROW(qcrb_ecs_linear(50, 0.25), RegionError);
  EXPECT_THROW(qcrb_ecs_linear(5, 0.0), DegenerateError);
  EXPECT_THROW(qcrb_ecs_linear(0, 1.0), DomainError);
}

TEST(EcsNonlinear, Examples) {
  EXPECT_NEAR(ecs_nonlinear_closed_form(1, 1.0), 4.0 / 225.0, 1e-16);
  EXPECT_NEAR(ecs_nonlinear_closed_form(5, 4.0), 0.0091613966180604366, 1e-17);
  // At both points the m = 2 optimum sits on the domain edge.
  EXPECT_THROW(qcrb_ecs_nonlinear(1, 1.0), RegionError);
  EXPECT_THROW(qcrb_ecs_nonlinear(5, 4.0), RegionError);
  EXPECT_NEAR(qcrb_ecs_nonlinear(1, 16.0).value, ecs_nonlinear_closed_form(1, 16.0), 1e-18);
  EXPECT_EQ(minimize_bound_over_b(5, 2, 4.0).regime, Regime::Clamped);
  // (1 + x)/(x^3 + 6x^2 + 7x + 1) is f(2)/f(4) at m = 2.
  for (double x : {0.5, 1.0, 3.0, 10.0}) {
    const double r = coherent_number_moment(2, x) / coherent_number_moment(4, x);
    EXPECT_NEAR(ecs_nonlinear_closed_form(3, x) / (core(3) / 4.0 * r * r), 1.0, 1e-14);
  }
}

TEST(MinimizeOverB, InteriorMatchesClosedForms) {
  for (int d = 1; d <= 10; ++d)
    for (double x : {6.25, 9.0, 16.0}) {
      const auto lin = minimize_bound_over_b(d, 1, x);
      ASSERT_EQ(lin.regime, Regime::Interior);
      EXPECT_NEAR(lin.value / ecs_linear_closed_form(d, x), 1.0, 1e-12);
      const auto nl = minimize_bound_over_b(d, 2, x);
      if (nl.regime == Regime::Interior) {
        EXPECT_NEAR(nl.value / ecs_nonlinear_closed_form(d, x), 1.0, 1e-12);
      }
    }
}

TEST(MinimizeOverB, ClampedUsesDomainEdge) {
  const auto r = minimize_bound_over_b(50, 1, 0.25);
  EXPECT_EQ(r.regime, Regime::Clamped);
  EXPECT_NEAR(*r.params.b, std::sqrt(b_domain_limit(50, 0.25)), 1e-15);
  EXPECT_NEAR(r.value, trace_inverse_bound(50, 1, 0.25, b_domain_limit(50, 0.25)), 1e-12 * r.value);
}

TEST(MinimizeOverB, AgreesWithGridScan) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(1, 10);
  std::uniform_real_distribution<double> amp(0.5, 25.0);
  for (int i = 0; i < 20; ++i) {
    const int d = dim(rng);
    const int m = 1 + i % 2;
    const double x = amp(rng);
    const auto best = minimize_bound_over_b(d, m, x);
    const auto scan = grid_scan_minimizer(d, m, x, 10000);
    EXPECT_LE(best.value, scan.value * (1.0 + 1e-12));
    EXPECT_LT((scan.value - best.value) / best.value, 1e-3) << "d=" << d << " m=" << m << " x=" << x;
  }
}

TEST(MinimizeOverB, NeverAboveAnyAdmissibleB) {
  for (int d : {1, 3, 20, 60})
    for (double x : {0.2, 1.0, 3.0}) {
      const auto best = minimize_bound_over_b(d, 1, x);
      const double cap = std::min(b_domain_limit(d, x), moment_ratio(1, x) / d);
      for (int i = 1; i < 200; ++i) {
        const double b_sq = cap * i / 200.0;
        EXPECT_LE(best.value, trace_inverse_bound(d, 1, x, b_sq) * (1.0 + 1e-12));
      }
    }
}

TEST(GridScan, Validation) {
  EXPECT_THROW(grid_scan_minimizer(2, 1, 1.0, 10), DomainError);
  EXPECT_THROW(noon_grid_scan(2, 3.0, 1, 999), DomainError);
}

TEST(NoonLinear, Examples) {
  EXPECT_NEAR(qcrb_noon_linear(5, 10.0).value, 0.13090169943749474, 1e-16);
  EXPECT_NEAR(qcrb_noon_linear(5, 4.0).value, 0.81813562148434214, 1e-15);
  EXPECT_NEAR(qcrb_noon_linear(1, 1.0).value, 1.0, 1e-15);
  EXPECT_NEAR(*qcrb_noon_linear(4, 2.0).params.b, 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_THROW(qcrb_noon_linear(5, 0.5), DomainError);
}

TEST(NoonLinear, GridScanAgrees) {
  const auto scan = noon_grid_scan(5, 10.0, 1, 20000);
  EXPECT_LT((scan.value - qcrb_noon_linear(5, 10.0).value) / scan.value, 1e-6);
}

TEST(NoonNonlinear, IsLinearOverNSquared) {
  for (double n : {1.0, 2.0, 10.0, 33.3}) {
    EXPECT_EQ(qcrb_noon_nonlinear(5, n).value, qcrb_noon_linear(5, n).value / (n * n));
  }
  EXPECT_NEAR(qcrb_noon_nonlinear(5, 10.0).value, 0.0013090169943749474, 1e-18);
}

TEST(IndependentEcs, Examples) {
  EXPECT_NEAR(qcrb_independent_ecs(1, 1.0).value, 0.41844721726404375, 1e-15);
  EXPECT_NEAR(qcrb_independent_ecs(4, 1.0).value, 4.0 * 0.41844721726404375, 1e-14);
  EXPECT_NEAR(two_mode_ecs_norm_sq(0.0), 0.25, 1e-16);
}

TEST(IndependentEcs, NtotFormMatchesAlphaForm) {
  for (int d : {1, 2, 7})
    for (double x : {0.05, 0.7, 3.0, 25.0}) {
      const auto direct = qcrb_independent_ecs(d, x);
      const auto via_ntot = independent_ecs_vs_ntot(d, *direct.params.n_tot);
      EXPECT_NEAR(*via_ntot.params.alpha_sq / x, 1.0, 1e-13);
      EXPECT_NEAR(via_ntot.value / direct.value, 1.0, 1e-12);
    }
}

TEST(IndependentNoon, Examples) {
  EXPECT_DOUBLE_EQ(qcrb_independent_noon(2, 4.0).value, 0.5);
  EXPECT_THROW(qcrb_independent_noon(2, 0.0), DomainError);
}

TEST(IndependentEcs, BelowIndependentNoon) {
  for (int d : {1, 3, 8})
    for (double n = 1.0; n <= 100.0; n += 0.37)
      EXPECT_LT(independent_ecs_vs_ntot(d, n).value, qcrb_independent_noon(d, n).value);
}

TEST(ZivZakai, Branches) {
  const auto b = ziv_zakai_branches(1, 1.0);
  EXPECT_NEAR(b.prior_limited, 0.0952299036524782, 1e-15);
  EXPECT_NEAR(b.heisenberg, 0.46740110027233966, 1e-15);
  EXPECT_NEAR(zzb_noon(1, 1.0).value, b.heisenberg, 1e-16);
  EXPECT_NEAR(b.heisenberg, (std::numbers::pi * std::numbers::pi / 16.0 - 0.5) * 4.0, 1e-15);
}

TEST(ZivZakai, EcsUsesShiftedPhotonNumber) {
  for (double x : {1.0, 4.0, 9.0})
    EXPECT_NEAR(zzb_ecs(5, x).value, ziv_zakai_branches(5, (x + 1) * (x + 1)).max(), 1e-15);
  EXPECT_THROW(zzb_ecs(5, 0.0), DegenerateError);
  EXPECT_THROW(zzb_noon(5, 10.0, 0.0), DomainError);
}

TEST(ZivZakai, LargeDPriorLimitedBranchDominates) {
  for (double n : {1.0, 7.0, 100.0}) {
    const auto b = ziv_zakai_branches(50, n * n);
    EXPECT_GT(b.prior_limited, b.heisenberg);
  }
}

TEST(RegionClassify, Examples) {
  EXPECT_TRUE(region_classify(5, 2.0, 1).interior);
  EXPECT_FALSE(region_classify(100, 0.1, 1).interior);
  for (double a = 0.05; a < 5.0; a += 0.05) EXPECT_TRUE(region_classify(1, a, 1).interior);
  EXPECT_THROW(region_classify(3, 0.0, 1), DegenerateError);
}

TEST(Bounds, NonincreasingInPhotonNumber) {
  for (int d : {1, 5, 9}) {
    double prev_ecs = ecs_linear_closed_form(d, 1.0);
    double prev_noon = qcrb_noon_linear(d, 1.0).value;
    for (double n = 1.1; n <= 50.0; n += 0.1) {
      const double ecs = ecs_linear_closed_form(d, n);
      const double noon = qcrb_noon_linear(d, n).value;
      EXPECT_LE(ecs, prev_ecs);
      EXPECT_LE(noon, prev_noon);
      prev_ecs = ecs;
      prev_noon = noon;
    }
  }
}

TEST(Bounds, KindAndRegimeStrings) {
  EXPECT_EQ(to_string(BoundKind::ZivZakaiNoon), "ZivZakaiNoon");
  EXPECT_EQ(to_string(Regime::Clamped), "Clamped");
  EXPECT_EQ(kRepetitions, 1);
}

}  // namespace
}  // namespace ecsqb
