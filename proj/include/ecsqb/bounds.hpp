#ifndef ECSQB_BOUNDS_HPP
#define ECSQB_BOUNDS_HPP

// Closed-form precision bounds on the total variance sum_j Var(theta_j) for
// the generalized ECS and NOON families, their independent-estimation
// baselines, and the quantum Ziv-Zakai bounds. All values are for a single
// repetition of the experiment.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include <boost/math/tools/roots.hpp>

#include "ecsqb/errors.hpp"
#include "ecsqb/moments.hpp"
#include "ecsqb/qfim.hpp"
#include "ecsqb/states.hpp"

namespace ecsqb {

/// Repetition count of the experiment; every bound here is per single shot.
inline constexpr int kRepetitions = 1;

/// Constant in the Ziv-Zakai bound, known only numerically.
inline constexpr double kZivZakaiLambda = 0.7246;

enum class BoundKind {
  EcsLinear,
  EcsNonlinear,
  NoonLinear,
  NoonNonlinear,
  IndependentEcs,
  IndependentNoon,
  ZivZakaiEcs,
  ZivZakaiNoon,
  GeneralEcsAtB,
};

enum class Regime { Interior, Clamped, NotApplicable };

inline std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::EcsLinear: return "EcsLinear";
    case BoundKind::EcsNonlinear: return "EcsNonlinear";
    case BoundKind::NoonLinear: return "NoonLinear";
    case BoundKind::NoonNonlinear: return "NoonNonlinear";
    case BoundKind::IndependentEcs: return "IndependentEcs";
    case BoundKind::IndependentNoon: return "IndependentNoon";
    case BoundKind::ZivZakaiEcs: return "ZivZakaiEcs";
    case BoundKind::ZivZakaiNoon: return "ZivZakaiNoon";
    case BoundKind::GeneralEcsAtB: return "GeneralEcsAtB";
  }
  return "Unknown";
}

inline std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Interior: return "Interior";
    case Regime::Clamped: return "Clamped";
    case Regime::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

/// Inputs that produced a bound. Unused fields stay empty.
struct BoundInputs {
  int d = 1;
  std::optional<int> m;
  std::optional<double> alpha_sq;
  std::optional<double> photon_number;
  std::optional<double> n_tot;
  std::optional<double> b;
};

struct BoundReport {
  double value = 0.0;
  BoundKind kind = BoundKind::GeneralEcsAtB;
  Regime regime = Regime::NotApplicable;
  BoundInputs params;
};

struct RegionCell {
  int d = 1;
  double alpha = 0.0;
  int m = 1;
  bool interior = false;
};

namespace detail {

inline double d_sqrt_d_factor(int d) {
  const double sd = std::sqrt(static_cast<double>(d));
  return d * (sd + 1.0) * (sd + 1.0);
}

inline void require_positive_alpha_sq(double alpha_sq) {
  if (!std::isfinite(alpha_sq)) throw DomainError("alpha_sq must be finite");
  if (!(alpha_sq > 0.0))
    throw DegenerateError("alpha_sq must be positive: at alpha = 0 the state carries no phase information");
}

inline void require_photon_number(double n) {
  if (!std::isfinite(n) || n < 1.0) throw DomainError("photon number N must be >= 1");
}

}  // namespace detail

/// d(sqrt d + 1)^2 / (4 (1 + alpha^2)^2), without a region check.
inline double ecs_linear_closed_form(int d, double alpha_sq) {
  detail::check_modes(d);
  detail::require_positive_alpha_sq(alpha_sq);
  const double s = 1.0 + alpha_sq;
  return detail::d_sqrt_d_factor(d) / (4.0 * s * s);
}

/// d(sqrt d + 1)^2/4 ((1 + x)/(x^3 + 6x^2 + 7x + 1))^2 with x = alpha^2,
/// without a region check.
inline double ecs_nonlinear_closed_form(int d, double alpha_sq) {
  detail::check_modes(d);
  detail::require_positive_alpha_sq(alpha_sq);
  const double x = alpha_sq;
  const double r = (1.0 + x) / (((x + 6.0) * x + 7.0) * x + 1.0);
  return detail::d_sqrt_d_factor(d) / 4.0 * r * r;
}

/// Minimum of Tr(F^{-1}) over |b| in [0, sqrt(Gamma)]: the stationary point
/// b_star when it is admissible, otherwise the domain edge b^2 = Gamma.
inline BoundReport minimize_bound_over_b(int d, int m, double alpha_sq) {
  detail::check_modes(d);
  detail::require_positive_alpha_sq(alpha_sq);
  const DomainGeometry geo = domain_geometry(d, m, alpha_sq);
  const double fm = coherent_number_moment(m, alpha_sq);
  const double f2m = coherent_number_moment(2 * m, alpha_sq);
  const BoundKind kind = m == 1 ? BoundKind::EcsLinear
                         : m == 2 ? BoundKind::EcsNonlinear
                                  : BoundKind::GeneralEcsAtB;
  BoundReport report{0.0, kind, Regime::Interior, {d, m, alpha_sq, {}, {}, {}}};
  if (geo.interior) {
    const double ratio = fm / f2m;
    report.value = detail::d_sqrt_d_factor(d) / 4.0 * ratio * ratio;
    report.params.b = geo.b_star;
    return report;
  }
  report.params.b = std::sqrt(geo.gamma_cap);
  const double gap = geo.g - geo.gamma_cap * d;
  if (!(gap > 0.0)) {
    report.regime = Regime::NotApplicable;
    report.value = std::numeric_limits<double>::infinity();
    return report;
  }
  report.regime = Regime::Clamped;
  report.value = d / (4.0 * f2m) * (1.0 / geo.gamma_cap + 1.0 / gap);
  return report;
}

namespace detail {

inline BoundReport closed_form_in_region(int d, double alpha_sq, int m, double value, BoundKind kind) {
  const DomainGeometry geo = domain_geometry(d, m, alpha_sq);
  if (!geo.interior)
    throw RegionError("b_star = " + std::to_string(geo.b_star) + " > sqrt(Gamma) = " +
                      std::to_string(std::sqrt(geo.gamma_cap)) + " at d=" + std::to_string(d) +
                      ", alpha_sq=" + std::to_string(alpha_sq) +
                      "; the closed form is not the optimum here, use minimize_bound_over_b");
  return {value, kind, Regime::Interior, {d, m, alpha_sq, {}, {}, geo.b_star}};
}

}  // namespace detail

inline BoundReport qcrb_ecs_linear(int d, double alpha_sq) {
  return detail::closed_form_in_region(d, alpha_sq, 1, ecs_linear_closed_form(d, alpha_sq),
                                       BoundKind::EcsLinear);
}

inline BoundReport qcrb_ecs_nonlinear(int d, double alpha_sq) {
  return detail::closed_form_in_region(d, alpha_sq, 2, ecs_nonlinear_closed_form(d, alpha_sq),
                                       BoundKind::EcsNonlinear);
}

inline BoundReport qcrb_noon_linear(int d, double photon_number) {
  detail::check_modes(d);
  detail::require_photon_number(photon_number);
  const double value = detail::d_sqrt_d_factor(d) / (4.0 * photon_number * photon_number);
  return {value, BoundKind::NoonLinear, Regime::NotApplicable,
          {d, 1, {}, photon_number, {}, noon_optimal_b(d)}};
}

/// d(sqrt d + 1)^2 / (4 N^4), computed as the linear bound divided by N^2.
inline BoundReport qcrb_noon_nonlinear(int d, double photon_number) {
  BoundReport report = qcrb_noon_linear(d, photon_number);
  report.value /= photon_number * photon_number;
  report.kind = BoundKind::NoonNonlinear;
  report.params.m = 2;
  return report;
}

/// Squared normalizing factor of the two-mode ECS, 1/(2(1 + e^{-alpha^2})).
inline double two_mode_ecs_norm_sq(double alpha_sq) {
  return 0.5 / (1.0 + std::exp(-alpha_sq));
}

/// d independent two-mode ECS probes, each with amplitude alpha:
/// d / (4 N^2 alpha^2 [1 + alpha^2 (1 - N^2)]).
inline BoundReport qcrb_independent_ecs(int d, double alpha_sq) {
  detail::check_modes(d);
  detail::require_positive_alpha_sq(alpha_sq);
  const double n_sq = two_mode_ecs_norm_sq(alpha_sq);
  const double single = 1.0 / (4.0 * n_sq * alpha_sq * (1.0 + alpha_sq * (1.0 - n_sq)));
  BoundReport report{d * single, BoundKind::IndependentEcs, Regime::NotApplicable,
                     {d, 1, alpha_sq, {}, 2.0 * d * n_sq * alpha_sq, {}}};
  return report;
}

/// Per-probe alpha^2 such that d independent ECS probes hold n_tot photons in
/// total, i.e. the root of d x / (1 + e^{-x}) = n_tot.
inline double independent_ecs_alpha_sq_for_ntot(int d, double n_tot) {
  detail::check_modes(d);
  if (!std::isfinite(n_tot) || !(n_tot > 0.0)) throw DomainError("n_tot must be positive");
  const double dd = d;
  // d x / 2 <= n_tot(x) <= d x brackets the root.
  const double lo = n_tot / dd;
  const double hi = 2.0 * n_tot / dd;
  auto residual = [dd, n_tot](double x) {
    const double e = std::exp(-x);
    const double denom = 1.0 + e;
    return std::pair<double, double>{dd * x / denom - n_tot, dd * (denom + x * e) / (denom * denom)};
  };
  std::uintmax_t iterations = 200;
  return boost::math::tools::newton_raphson_iterate(residual, 0.5 * (lo + hi), lo, hi,
                                                    std::numeric_limits<double>::digits - 2,
                                                    iterations);
}

/// d^3 / (N_tot [2d + N_tot (N^{-2} - 1)]), with the probe normalizer N taken
/// at the alpha that realizes n_tot.
inline BoundReport independent_ecs_vs_ntot(int d, double n_tot) {
  const double alpha_sq = independent_ecs_alpha_sq_for_ntot(d, n_tot);
  const double inv_n_sq = 1.0 / two_mode_ecs_norm_sq(alpha_sq);
  const double dd = d;
  const double value = dd * dd * dd / (n_tot * (2.0 * dd + n_tot * (inv_n_sq - 1.0)));
  return {value, BoundKind::IndependentEcs, Regime::NotApplicable, {d, 1, alpha_sq, {}, n_tot, {}}};
}

/// d^3 / N_tot^2.
inline BoundReport qcrb_independent_noon(int d, double n_tot) {
  detail::check_modes(d);
  if (!std::isfinite(n_tot) || !(n_tot > 0.0)) throw DomainError("n_tot must be positive");
  const double dd = d;
  return {dd * dd * dd / (n_tot * n_tot), BoundKind::IndependentNoon, Regime::NotApplicable,
          {d, 1, {}, {}, n_tot, {}}};
}

/// The two expressions inside the Ziv-Zakai max, for a squared photon
/// argument s (N^2 for NOON, (alpha^2 + 1)^2 for ECS).
struct ZivZakaiBranches {
  double prior_limited = 0.0;   // d(d + sqrt d)^2 / (80 lambda^2 s)
  double heisenberg = 0.0;      // (pi^2/16 - 1/2) d(d + sqrt d)^2 / ((d + sqrt d - 1) s)
  double max() const { return prior_limited > heisenberg ? prior_limited : heisenberg; }
};

inline ZivZakaiBranches ziv_zakai_branches(int d, double photon_arg_sq, double lambda = kZivZakaiLambda) {
  detail::check_modes(d);
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double sd = std::sqrt(static_cast<double>(d));
  const double core = d * (d + sd) * (d + sd);
  const double pi = std::numbers::pi;
  return {core / (80.0 * lambda * lambda * photon_arg_sq),
          (pi * pi / 16.0 - 0.5) * core / ((d + sd - 1.0) * photon_arg_sq)};
}

inline BoundReport zzb_noon(int d, double photon_number, double lambda = kZivZakaiLambda) {
  detail::require_photon_number(photon_number);
  const auto branches = ziv_zakai_branches(d, photon_number * photon_number, lambda);
  return {branches.max(), BoundKind::ZivZakaiNoon, Regime::NotApplicable,
          {d, 1, {}, photon_number, {}, {}}};
}

/// ECS Ziv-Zakai bound: the NOON expression with N^2 -> (alpha^2 + 1)^2.
inline BoundReport zzb_ecs(int d, double alpha_sq, double lambda = kZivZakaiLambda) {
  detail::require_positive_alpha_sq(alpha_sq);
  const double s = alpha_sq + 1.0;
  const auto branches = ziv_zakai_branches(d, s * s, lambda);
  return {branches.max(), BoundKind::ZivZakaiEcs, Regime::NotApplicable,
          {d, 1, alpha_sq, {}, {}, {}}};
}

inline RegionCell region_classify(int d, double alpha, int m) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DegenerateError("alpha must be positive");
  const DomainGeometry geo = domain_geometry(d, m, alpha * alpha);
  return {d, alpha, m, geo.interior};
}

/// Brute-force minimizer of Tr(F^{-1}) over a uniform grid in b^2. The
/// scan domain is (0, Gamma] when Gamma < g/d and (0, g/d) otherwise.
inline BoundReport grid_scan_minimizer(int d, int m, double alpha_sq, int grid_points) {
  if (grid_points < 1000) throw DomainError("grid_scan_minimizer: need at least 1000 grid points");
  detail::require_positive_alpha_sq(alpha_sq);
  const double gamma = b_domain_limit(d, alpha_sq);
  const double pole = moment_ratio(m, alpha_sq) / d;
  const bool edge_included = gamma < pole;
  const double hi = edge_included ? gamma : pole;
  const double denom = edge_included ? grid_points : grid_points + 1.0;

  double best = std::numeric_limits<double>::infinity();
  int best_index = 0;
  for (int i = 1; i <= grid_points; ++i) {
    const double b_sq = hi * (i / denom);
    const double value = trace_inverse_bound(d, m, alpha_sq, b_sq);
    if (value < best) {
      best = value;
      best_index = i;
    }
  }
  const bool at_edge = edge_included && best_index == grid_points;
  return {best, BoundKind::GeneralEcsAtB, at_edge ? Regime::Clamped : Regime::Interior,
          {d, m, alpha_sq, {}, {}, std::sqrt(hi * (best_index / denom))}};
}

/// Same scan for the NOON family over b^2 in (0, 1/d).
inline BoundReport noon_grid_scan(int d, double photon_number, int m, int grid_points) {
  if (grid_points < 1000) throw DomainError("noon_grid_scan: need at least 1000 grid points");
  detail::check_modes(d);
  detail::require_photon_number(photon_number);
  const double hi = 1.0 / d;
  double best = std::numeric_limits<double>::infinity();
  double best_b_sq = 0.0;
  for (int i = 1; i <= grid_points; ++i) {
    const double b_sq = hi * (i / (grid_points + 1.0));
    const double value = noon_trace_inverse(d, photon_number, m, b_sq);
    if (value < best) {
      best = value;
      best_b_sq = b_sq;
    }
  }
  return {best, m == 1 ? BoundKind::NoonLinear : BoundKind::NoonNonlinear, Regime::Interior,
          {d, m, {}, photon_number, {}, std::sqrt(best_b_sq)}};
}

}  // namespace ecsqb

#endif  // ECSQB_BOUNDS_HPP
