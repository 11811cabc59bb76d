#ifndef ECSQB_MOMENTS_HPP
#define ECSQB_MOMENTS_HPP

// Photon-number moments of a single-mode coherent state,
//   f(m, alpha) = <alpha|(a^dag a)^m|alpha>,
// as a Touchard polynomial in mu = |alpha|^2, plus an independent
// Poisson-sum evaluation used for cross-checking.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ecsqb/errors.hpp"

namespace ecsqb {

struct MomentQuery {
  int m = 0;
  double mu = 0.0;
};

namespace detail {

inline void check_query(const MomentQuery& q) {
  if (q.m < 0) throw DomainError("moment order m must be nonnegative, got " + std::to_string(q.m));
  if (!(q.mu >= 0.0) || !std::isfinite(q.mu))
    throw DomainError("mean photon number mu must be finite and nonnegative");
}

/// Row m of the Stirling triangle, S(m, 0..m). Throws RangeError on overflow.
inline std::vector<std::uint64_t> stirling2_row(int m) {
  if (m < 0) throw DomainError("stirling2: m must be nonnegative");
  std::vector<std::uint64_t> row{1};  // S(0,0)
  for (int n = 1; n <= m; ++n) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 1; k <= n; ++k) {
      std::uint64_t keep = 0;
      if (k < n && __builtin_mul_overflow(static_cast<std::uint64_t>(k), row[k], &keep))
        throw RangeError("stirling2: S(" + std::to_string(n) + "," + std::to_string(k) +
                         ") exceeds 64-bit range");
      std::uint64_t value = 0;
      if (__builtin_add_overflow(keep, row[k - 1], &value))
        throw RangeError("stirling2: S(" + std::to_string(n) + "," + std::to_string(k) +
                         ") exceeds 64-bit range");
      next[k] = value;
    }
    row = std::move(next);
  }
  return row;
}

}  // namespace detail

/// Stirling number of the second kind S(m, k), via
/// S(m,k) = k S(m-1,k) + S(m-1,k-1).
inline std::uint64_t stirling2(int m, int k) {
  if (m < 0 || k < 0 || k > m)
    throw DomainError("stirling2: requires 0 <= k <= m, got m=" + std::to_string(m) +
                      ", k=" + std::to_string(k));
  return detail::stirling2_row(m)[static_cast<std::size_t>(k)];
}

/// f(m, alpha) = sum_k S(m,k) mu^k.
inline double coherent_number_moment(const MomentQuery& q) {
  detail::check_query(q);
  const auto row = detail::stirling2_row(q.m);
  double acc = 0.0;
  for (int k = q.m; k >= 0; --k) acc = acc * q.mu + static_cast<double>(row[k]);
  return acc;
}

inline double coherent_number_moment(int m, double mu) { return coherent_number_moment({m, mu}); }

/// Poisson-weighted sum  sum_n e^{-mu} mu^n/n! n^m, stopped once a geometric
/// majorant of the remaining tail is below tail_tol.
///
/// The term ratio t_{n+1}/t_n = mu/(n+1) (1+1/n)^m is decreasing in n, so
/// once it drops below one at index n the tail after t_n is at most
/// t_n r/(1-r).
inline double moment_via_poisson_sum(const MomentQuery& q, double tail_tol) {
  detail::check_query(q);
  if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be positive");
  if (q.mu == 0.0) return q.m == 0 ? 1.0 : 0.0;

  double weight = std::exp(-q.mu);  // e^{-mu} mu^n / n!
  double sum = q.m == 0 ? weight : 0.0;
  // Handles mu so large that e^{-mu} underflows.
  double log_weight = -q.mu;
  for (long n = 1;; ++n) {
    log_weight += std::log(q.mu) - std::log(static_cast<double>(n));
    weight = std::exp(log_weight);
    const double term = weight * std::pow(static_cast<double>(n), q.m);
    sum += term;
    if (static_cast<double>(n) > q.mu) {
      const double ratio = q.mu / static_cast<double>(n + 1) *
                           std::pow(1.0 + 1.0 / static_cast<double>(n), q.m);
      if (ratio < 1.0 && term * ratio / (1.0 - ratio) < tail_tol) break;
    }
  }
  return sum;
}

inline double moment_via_poisson_sum(int m, double mu, double tail_tol) {
  return moment_via_poisson_sum({m, mu}, tail_tol);
}

}  // namespace ecsqb

#endif  // ECSQB_MOMENTS_HPP
