#ifndef ECSQB_STATES_HPP
#define ECSQB_STATES_HPP

// Coefficient geometry of the generalized entangled coherent state
//   |psi> = b sum_{j=1..d} |alpha>_j + c |alpha>_0
// and of the generalized NOON state b sum_j |N>_j + c |N>_0.
//
// b is taken real and nonnegative; c is real (global phase). The
// normalization constraint is c^2 + 2 b v c + b^2 u = 1.

#include <algorithm>
#include <cmath>
#include <string>

#include "ecsqb/errors.hpp"
#include "ecsqb/moments.hpp"

namespace ecsqb {

/// Absolute tolerance on the normalization constraint.
inline constexpr double kNormalizationTol = 1e-12;

struct EcsParams {
  int d = 1;
  double alpha_sq = 0.0;
  double b = 0.0;
  double c = 1.0;
  int m = 1;
};

struct NoonParams {
  int d = 1;
  int photon_number = 1;
  double b = 0.0;
  double c = 1.0;
  int m = 1;
};

struct DomainGeometry {
  double gamma_cap = 0.0;  // upper limit of b^2
  double b_star = 0.0;     // unconstrained minimizer of the bound over b
  double g = 0.0;          // f(2m)/f(m)^2
  bool interior = false;   // b_star <= sqrt(gamma_cap)
};

struct UvCoefficients {
  double u = 0.0;
  double v = 0.0;
};

/// Which root of the c-quadratic to return. `Larger` is the one that is
/// continuously connected to c = 1 at b = 0.
enum class RootBranch { Larger, Smaller };

namespace detail {

inline void check_modes(int d) {
  if (d < 1) throw DomainError("mode count d must be >= 1, got " + std::to_string(d));
}

inline void check_alpha_sq(double alpha_sq) {
  if (!std::isfinite(alpha_sq) || alpha_sq < 0.0)
    throw DomainError("alpha_sq must be finite and nonnegative");
}

/// u - v^2 = d (1 - e^{-x}) (1 + d e^{-x}), free of cancellation at small x.
inline double normalization_gap(int d, double alpha_sq) {
  const double dd = d;
  return dd * -std::expm1(-alpha_sq) * (1.0 + dd * std::exp(-alpha_sq));
}

}  // namespace detail

inline UvCoefficients uv_coefficients(int d, double alpha_sq) {
  detail::check_modes(d);
  detail::check_alpha_sq(alpha_sq);
  const double e = std::exp(-alpha_sq);
  const double dd = d;
  return {dd + dd * (dd - 1.0) * e, dd * e};
}

/// Gamma = 1/(u - v^2), the largest admissible b^2.
inline double b_domain_limit(int d, double alpha_sq) {
  detail::check_modes(d);
  detail::check_alpha_sq(alpha_sq);
  const double gap = detail::normalization_gap(d, alpha_sq);
  if (!(gap > 0.0))
    throw DegenerateError("b-domain is degenerate at alpha_sq = " + std::to_string(alpha_sq) +
                          " (u - v^2 <= 0): all branches collapse to vacuum");
  return 1.0 / gap;
}

/// Reference-branch coefficient c for a given b, solving
/// c^2 + 2 b v c + b^2 u - 1 = 0.
inline double solve_c(double b, int d, double alpha_sq, RootBranch branch = RootBranch::Larger) {
  detail::check_modes(d);
  detail::check_alpha_sq(alpha_sq);
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  const double v = uv_coefficients(d, alpha_sq).v;
  double disc = 1.0 - b * b * detail::normalization_gap(d, alpha_sq);
  if (disc < 0.0) {
    if (disc < -kNormalizationTol)
      throw DomainError("b^2 = " + std::to_string(b * b) +
                        " exceeds the normalizable domain; no real c exists");
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  return branch == RootBranch::Larger ? -b * v + root : -b * v - root;
}

/// g = f(2m)/f(m)^2.
inline double moment_ratio(int m, double alpha_sq) {
  if (m < 1) throw DomainError("generator order m must be >= 1");
  if (!(alpha_sq > 0.0)) throw DegenerateError("moment ratio undefined at alpha_sq = 0");
  const double fm = coherent_number_moment(m, alpha_sq);
  return coherent_number_moment(2 * m, alpha_sq) / (fm * fm);
}

inline double b_star(int d, int m, double alpha_sq) {
  detail::check_modes(d);
  const double sd = std::sqrt(static_cast<double>(d));
  return std::sqrt(moment_ratio(m, alpha_sq) / (sd + d));
}

inline DomainGeometry domain_geometry(int d, int m, double alpha_sq) {
  DomainGeometry geo;
  geo.gamma_cap = b_domain_limit(d, alpha_sq);
  geo.g = moment_ratio(m, alpha_sq);
  geo.b_star = b_star(d, m, alpha_sq);
  geo.interior = geo.b_star <= std::sqrt(geo.gamma_cap);
  return geo;
}

/// alpha^2 (d b^2 + c^2).
inline double mean_total_photons(const EcsParams& p) {
  return p.alpha_sq * (p.d * p.b * p.b + p.c * p.c);
}

inline double noon_optimal_b(int d) {
  detail::check_modes(d);
  return 1.0 / std::sqrt(d + std::sqrt(static_cast<double>(d)));
}

/// Residual of the ECS normalization constraint, <psi|psi> - 1.
inline double normalization_residual(const EcsParams& p) {
  const auto [u, v] = uv_coefficients(p.d, p.alpha_sq);
  return p.c * p.c + 2.0 * p.b * v * p.c + p.b * p.b * u - 1.0;
}

inline EcsParams validate_ecs(const EcsParams& p) {
  detail::check_modes(p.d);
  if (p.m < 1) throw DomainError("generator order m must be >= 1, got " + std::to_string(p.m));
  detail::check_alpha_sq(p.alpha_sq);
  if (!std::isfinite(p.b) || !std::isfinite(p.c)) throw DomainError("b and c must be finite");
  if (p.b < 0.0) throw DomainError("b must be nonnegative (real b convention)");
  const double gamma = b_domain_limit(p.d, p.alpha_sq);
  if (p.b * p.b > gamma + kNormalizationTol)
    throw DomainError("b out of domain: b^2 = " + std::to_string(p.b * p.b) +
                      " > Gamma = " + std::to_string(gamma));
  const double residual = normalization_residual(p);
  if (std::abs(residual) > kNormalizationTol)
    throw DomainError("normalization violated: c^2 + 2bvc + b^2u - 1 = " +
                      std::to_string(residual));
  return p;
}

/// Builds validated ECS parameters with c solved from b.
inline EcsParams make_ecs(int d, double alpha_sq, double b, int m,
                          RootBranch branch = RootBranch::Larger) {
  EcsParams p{d, alpha_sq, b, 0.0, m};
  p.c = solve_c(b, d, alpha_sq, branch);
  return validate_ecs(p);
}

inline NoonParams validate_noon(const NoonParams& p) {
  detail::check_modes(p.d);
  if (p.m < 1) throw DomainError("generator order m must be >= 1");
  if (p.photon_number < 1) throw DomainError("photon number N must be >= 1");
  if (p.b < 0.0) throw DomainError("b must be nonnegative");
  const double residual = p.d * p.b * p.b + p.c * p.c - 1.0;
  if (std::abs(residual) > kNormalizationTol)
    throw DomainError("NOON normalization violated: d b^2 + c^2 - 1 = " + std::to_string(residual));
  return p;
}

inline NoonParams make_noon(int d, int photon_number, double b, int m) {
  const double c_sq = 1.0 - d * b * b;
  if (c_sq < -kNormalizationTol) throw DomainError("NOON b exceeds 1/sqrt(d)");
  return validate_noon({d, photon_number, b, std::sqrt(std::max(c_sq, 0.0)), m});
}

}  // namespace ecsqb

#endif  // ECSQB_STATES_HPP
