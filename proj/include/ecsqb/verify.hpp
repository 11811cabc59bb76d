#ifndef ECSQB_VERIFY_HPP
#define ECSQB_VERIFY_HPP

// Cross-verification suites: every closed form is checked against an
// independent route (Poisson sums, the truncated Fock-space oracle, dense
// linear algebra, brute-force grid scans) or against a stated property of the
// bounds. Each check reports the largest discrepancy it observed.
//
// Randomized draws come from a single seeded generator consumed sequentially
// before any fan-out, so reports do not depend on the worker count.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecsqb/bounds.hpp"
#include "ecsqb/moments.hpp"
#include "ecsqb/oracle.hpp"
#include "ecsqb/qfim.hpp"
#include "ecsqb/states.hpp"
#include "ecsqb/sweep.hpp"

namespace ecsqb::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance_overrides;
  unsigned workers = worker_count();

  double tol(const std::string& check, double fallback) const {
    const auto it = tolerance_overrides.find(check);
    return it == tolerance_overrides.end() ? fallback : it->second;
  }
};

namespace detail {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

inline double rel_frobenius(const DenseMatrix& got, const DenseMatrix& want) {
  return (got - want).norm() / want.norm();
}

/// A check that passes iff max_discrepancy <= tolerance.
inline CheckResult bounded(std::string name, double max_discrepancy, double tolerance, std::string detail = {}) {
  return {std::move(name), max_discrepancy <= tolerance, max_discrepancy, tolerance, std::move(detail)};
}

/// A check on a claim; discrepancy is the count of violations.
inline CheckResult claim(std::string name, long violations, std::string detail = {}) {
  return {std::move(name), violations == 0, static_cast<double>(violations), 0.0, std::move(detail)};
}

struct GridPoint {
  int d;
  int m;
  double alpha_sq;
  double b;
};

/// d in {1..4}, m in {1,2}, alpha_sq in {0.25, 1, 4}, b in {0.1, min(b*, 0.99 sqrt Gamma)}.
inline std::vector<GridPoint> qfim_grid() {
  std::vector<GridPoint> grid;
  for (int d = 1; d <= 4; ++d)
    for (int m = 1; m <= 2; ++m)
      for (double x : {0.25, 1.0, 4.0}) {
        const double clipped = std::min(b_star(d, m, x), 0.99 * std::sqrt(b_domain_limit(d, x)));
        for (double b : {0.1, clipped}) grid.push_back({d, m, x, b});
      }
  return grid;
}

}  // namespace detail

/// Stirling closed form vs Poisson sum, and the tabulated f(2), f(4).
inline std::vector<CheckResult> check_moments(const Options& opt) {
  std::vector<CheckResult> out;
  const std::vector<double> mus{0.1, 0.5, 1.0, 2.0, 4.0, 9.0, 16.0};
  double worst = 0.0;
  for (int m = 0; m <= 12; ++m)
    for (double mu : mus) {
      const double closed = coherent_number_moment(m, mu);
      const double summed = moment_via_poisson_sum(m, mu, 1e-13 * std::max(1.0, closed));
      worst = std::max(worst, std::abs(closed - summed) / std::max(1.0, closed));
    }
  out.push_back(detail::bounded("moments.closed_form_vs_poisson_sum", worst, opt.tol("moments.closed_form_vs_poisson_sum", 1e-10)));

  // Coefficients: f(2) = mu + mu^2 and f(4) = mu + 7mu^2 + 6mu^3 + mu^4.
  long coeff_mismatch = 0;
  const std::vector<std::uint64_t> f2{0, 1, 1};
  const std::vector<std::uint64_t> f4{0, 1, 7, 6, 1};
  for (int k = 0; k <= 2; ++k) coeff_mismatch += stirling2(2, k) != f2[static_cast<std::size_t>(k)];
  for (int k = 0; k <= 4; ++k) coeff_mismatch += stirling2(4, k) != f4[static_cast<std::size_t>(k)];
  out.push_back(detail::claim("moments.tabulated_polynomial_coefficients", coeff_mismatch));

  double poly_worst = 0.0;
  for (double mu : mus) {
    poly_worst = std::max(poly_worst, detail::rel_err(coherent_number_moment(2, mu), mu * (1.0 + mu)));
    const double p4 = mu * mu * mu * mu + 6.0 * mu * mu * mu + 7.0 * mu * mu + mu;
    poly_worst = std::max(poly_worst, detail::rel_err(coherent_number_moment(4, mu), p4));
  }
  out.push_back(detail::bounded("moments.tabulated_polynomial_values", poly_worst,
                                opt.tol("moments.tabulated_polynomial_values", 4.0 * std::numeric_limits<double>::epsilon())));

  long jensen = 0;
  for (int m = 1; m <= 6; ++m)
    for (double mu : mus) {
      const double fm = coherent_number_moment(m, mu);
      jensen += !(coherent_number_moment(2 * m, mu) > fm * fm);
    }
  out.push_back(detail::claim("moments.second_moment_exceeds_square", jensen));
  return out;
}

/// Oracle norm and photon number of ECS states across the admissible b range,
/// and sparse vs dense tensor agreement.
inline std::vector<CheckResult> check_normalization(const Options& opt) {
  struct Case {
    int d;
    double alpha_sq;
  };
  const std::vector<Case> cases{{1, 0.5}, {2, 1.0}, {3, 2.0}, {5, 4.0}};
  auto worst = parallel_map(
      cases.size(),
      [&cases](std::size_t i) {
        const auto [d, x] = cases[i];
        const double root_gamma = std::sqrt(b_domain_limit(d, x));
        const int cutoff = oracle::auto_cutoff(x, 1);
        double norm_err = 0.0;
        double photon_err = 0.0;
        for (int k = 0; k < 1000; ++k) {
          const double b = root_gamma * k / 1000.0;
          const EcsParams p = make_ecs(d, x, b, 1);
          const auto psi = oracle::build_ecs_state(p, cutoff);
          norm_err = std::max(norm_err, std::abs(oracle::inner_product(psi, psi).real() - 1.0));
          if (k % 50 == 0)
            photon_err = std::max(photon_err, detail::rel_err(oracle::total_number_expectation(psi), mean_total_photons(p)));
        }
        return std::pair{norm_err, photon_err};
      },
      opt.workers);
  double norm_err = 0.0;
  double photon_err = 0.0;
  for (const auto& [n, ph] : worst) {
    norm_err = std::max(norm_err, n);
    photon_err = std::max(photon_err, ph);
  }
  std::vector<CheckResult> out;
  out.push_back(detail::bounded("normalization.oracle_norm", norm_err, opt.tol("normalization.oracle_norm", 1e-10)));
  out.push_back(detail::bounded("normalization.mean_photons", photon_err, opt.tol("normalization.mean_photons", 1e-9)));

  double tensor_err = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const EcsParams p = make_ecs(d, 1.0, 0.4, 1);
    const auto sparse = oracle::build_ecs_state(p, 10, 1e-7);
    const auto dense = oracle::dense_tensor_state(sparse);
    tensor_err = std::max(tensor_err, std::abs(oracle::inner_product(sparse, sparse) - oracle::inner_product(dense, dense)));
    tensor_err = std::max(tensor_err, detail::rel_frobenius(oracle::qfim_from_generators(dense, d, 1),
                                                            oracle::qfim_from_generators(sparse, d, 1)));
  }
  out.push_back(detail::bounded("normalization.sparse_vs_dense_tensor", tensor_err, opt.tol("normalization.sparse_vs_dense_tensor", 1e-12)));
  return out;
}

/// Analytic QFIM vs the oracle's generator-covariance QFIM and its
/// finite-difference QFIM on the standard grid, plus theta independence.
inline std::vector<CheckResult> check_qfim_oracle(const Options& opt) {
  const auto grid = detail::qfim_grid();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<std::vector<double>> thetas;
  for (const auto& pt : grid) {
    std::vector<double> t(static_cast<std::size_t>(pt.d));
    for (auto& v : t) v = angle(rng);
    thetas.push_back(std::move(t));
  }
  // The central-difference error of e^{i n^m theta} is ~ (n^m h)^2/6, which
  // at m = 2, alpha^2 = 4 is about 2e-5 for the default h = 1e-4.
  constexpr double kFdStep = 1e-5;
  struct Errors {
    double analytic = 0.0;
    double fd = 0.0;
    double theta = 0.0;
  };
  const auto errors = parallel_map(
      grid.size(),
      [&](std::size_t i) {
        const auto& pt = grid[i];
        const EcsParams p = make_ecs(pt.d, pt.alpha_sq, pt.b, pt.m);
        const DenseMatrix analytic = to_dense(ecs_qfim(p));
        const auto psi = oracle::build_ecs_state(p);
        const DenseMatrix numeric = oracle::qfim_from_generators(psi, pt.d, pt.m);
        const DenseMatrix fd0 =
            oracle::qfim_via_state_derivatives(psi, pt.m, std::vector<double>(static_cast<std::size_t>(pt.d), 0.0), kFdStep);
        const DenseMatrix fd_theta = oracle::qfim_via_state_derivatives(psi, pt.m, thetas[i], kFdStep);
        return Errors{detail::rel_frobenius(numeric, analytic), detail::rel_frobenius(fd0, numeric),
                      detail::rel_frobenius(fd_theta, fd0)};
      },
      opt.workers);
  Errors worst;
  for (const auto& e : errors) {
    worst.analytic = std::max(worst.analytic, e.analytic);
    worst.fd = std::max(worst.fd, e.fd);
    worst.theta = std::max(worst.theta, e.theta);
  }
  return {detail::bounded("qfim.analytic_vs_oracle", worst.analytic, opt.tol("qfim.analytic_vs_oracle", 1e-8)),
          detail::bounded("qfim.finite_difference_vs_oracle", worst.fd, opt.tol("qfim.finite_difference_vs_oracle", 1e-5)),
          detail::bounded("qfim.theta_independence", worst.theta, opt.tol("qfim.theta_independence", 1e-9))};
}

/// Structured inverse on random draws, and Tr(F^{-1}) closed form vs a dense
/// LU inverse on the standard grid.
inline std::vector<CheckResult> check_structured_inverse(const Options& opt) {
  std::mt19937_64 rng(opt.seed ^ 0x5eedULL);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> gamma_dist(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const int d = dim(rng);
    const double gamma = gamma_dist(rng);
    const double lo = -1.0 / d;
    // omega in (-1/d, 5]
    const double omega = 5.0 - (5.0 - lo) * unit(rng);
    const StructuredQfim f{d, gamma, omega};
    const DenseMatrix product = to_dense(qfim_inverse(f)) * to_dense(f);
    worst = std::max(worst, (product - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  double trace_worst = 0.0;
  for (const auto& pt : detail::qfim_grid()) {
    const EcsParams p = make_ecs(pt.d, pt.alpha_sq, pt.b, pt.m);
    trace_worst = std::max(trace_worst, detail::rel_err(trace_inverse_bound(p), dense_inverse(to_dense(ecs_qfim(p))).trace()));
  }
  return {detail::bounded("inverse.structured_times_dense_is_identity", worst, opt.tol("inverse.structured_times_dense_is_identity", 1e-10)),
          detail::bounded("inverse.trace_formula_vs_dense", trace_worst, opt.tol("inverse.trace_formula_vs_dense", 1e-12))};
}

/// Piecewise closed-form optimum vs a 10^4-point scan on random draws, and
/// the interior branch vs the linear/nonlinear closed forms.
inline std::vector<CheckResult> check_optimizer(const Options& opt) {
  std::mt19937_64 rng(opt.seed ^ 0x0b7ULL);
  std::uniform_int_distribution<int> dim(1, 10);
  std::uniform_int_distribution<int> order(1, 2);
  std::uniform_real_distribution<double> amp(0.5, 25.0);
  struct Draw {
    int d;
    int m;
    double x;
  };
  std::vector<Draw> draws;
  for (int i = 0; i < 50; ++i) {
    const int d = dim(rng);
    const int m = order(rng);
    draws.push_back({d, m, amp(rng)});
  }
  struct Errors {
    double scan = 0.0;
    double closed = 0.0;
    bool interior = false;
  };
  const auto errors = parallel_map(
      draws.size(),
      [&draws](std::size_t i) {
        const auto [d, m, x] = draws[i];
        const BoundReport best = minimize_bound_over_b(d, m, x);
        const BoundReport scan = grid_scan_minimizer(d, m, x, 10000);
        Errors e{detail::rel_err(best.value, scan.value), 0.0, best.regime == Regime::Interior};
        if (e.interior)
          e.closed = detail::rel_err(best.value, m == 1 ? ecs_linear_closed_form(d, x) : ecs_nonlinear_closed_form(d, x));
        return e;
      },
      opt.workers);
  double scan_worst = 0.0;
  double closed_worst = 0.0;
  int interior = 0;
  for (const auto& e : errors) {
    scan_worst = std::max(scan_worst, e.scan);
    closed_worst = std::max(closed_worst, e.closed);
    interior += e.interior;
  }
  return {detail::bounded("optimizer.closed_form_vs_grid_scan", scan_worst, opt.tol("optimizer.closed_form_vs_grid_scan", 1e-3)),
          detail::bounded("optimizer.interior_matches_closed_forms", closed_worst, opt.tol("optimizer.interior_matches_closed_forms", 1e-12),
                          std::to_string(interior) + " of 50 draws interior")};
}

/// Reference values of the linear ECS and NOON bounds at d = 5.
inline std::vector<CheckResult> check_headline(const Options& opt) {
  const double s5 = std::sqrt(5.0);
  const double core = 5.0 * (s5 + 1.0) * (s5 + 1.0);
  const double ecs = qcrb_ecs_linear(5, 4.0).value;
  const double noon_l = qcrb_noon_linear(5, 10.0).value;
  const double noon_nl = qcrb_noon_nonlinear(5, 10.0).value;
  return {detail::bounded("headline.ecs_linear_d5_alpha2", detail::rel_err(ecs, core / 100.0), opt.tol("headline.ecs_linear_d5_alpha2", 1e-12)),
          detail::bounded("headline.noon_linear_d5_n10", detail::rel_err(noon_l, core / 400.0), opt.tol("headline.noon_linear_d5_n10", 1e-12)),
          detail::claim("headline.noon_nonlinear_is_linear_over_100", noon_nl == noon_l / 100.0 ? 0 : 1)};
}

/// Bound-vs-photon claims at d = 5 on an N_tot grid of spacing 0.01 over [1, 100].
inline std::vector<CheckResult> check_photon_curves(const Options&) {
  const int d = 5;
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  long not_below_noon = 0;
  long wrong_side = 0;
  long ratio_out = 0;
  double crossing_lo = 0.0;
  double crossing_hi = 0.0;
  int sign_changes = 0;
  bool prev_below = true;
  for (int i = 0; i <= 9900; ++i) {
    const double n = 1.0 + 0.01 * i;
    const double ecs = ecs_linear_closed_form(d, n);
    const double noon_l = qcrb_noon_linear(d, n).value;
    const double noon_nl = qcrb_noon_nonlinear(d, n).value;
    not_below_noon += !(ecs < noon_l);
    const bool below = ecs < noon_nl;
    wrong_side += below != (n < golden);
    if (i > 0 && below != prev_below) {
      ++sign_changes;
      crossing_lo = n - 0.01;
      crossing_hi = n;
    }
    prev_below = below;
    if (n >= 50.0) {
      const double r = ecs / noon_l;
      ratio_out += !(r >= 0.95 && r <= 1.0);
    }
  }
  const bool bracketed = sign_changes == 1 && crossing_lo < golden && golden <= crossing_hi &&
                         crossing_hi - crossing_lo <= 0.01 + 1e-12;
  std::ostringstream where;
  where << "sign change in [" << crossing_lo << ", " << crossing_hi << "]";
  return {detail::claim("curves.ecs_linear_below_noon_linear", not_below_noon),
          detail::claim("curves.ecs_linear_below_noon_nonlinear_iff_below_golden_ratio", wrong_side + (bracketed ? 0 : 1), where.str()),
          detail::claim("curves.large_ntot_ratio_in_band", ratio_out)};
}

/// Region claims for the linear protocol and the large-alpha limits.
inline std::vector<CheckResult> check_region(const Options& opt) {
  const SweepGrid grid = region_sweep({1, 1, 100, 0.0, 4.0, 400}, opt.workers);
  long violations = 0;
  long inspected = 0;
  for (const auto& row : grid.cells) {
    const int d = std::stoi(row[0]);
    const double alpha = std::stod(row[1]);
    if (alpha >= 2.5 && d <= 10) {
      ++inspected;
      violations += row[5] != "1";
    }
  }
  double gamma_err = 0.0;
  double b_star_err = 0.0;
  for (int d = 1; d <= 100; ++d) {
    gamma_err = std::max(gamma_err, std::abs(b_domain_limit(d, 49.0) - 1.0 / d));
    b_star_err = std::max(b_star_err, std::abs(b_star(d, 1, 49.0) - noon_optimal_b(d)));
  }
  return {detail::claim("region.interior_for_alpha_ge_2.5_d_le_10", violations, std::to_string(inspected) + " cells inspected"),
          detail::bounded("region.gamma_limit_alpha_sq_49", gamma_err, opt.tol("region.gamma_limit_alpha_sq_49", 1e-10)),
          detail::bounded("region.b_star_limit_alpha_sq_49", b_star_err, opt.tol("region.b_star_limit_alpha_sq_49", 1e-6),
                          "b_star = sqrt((1 + 1/alpha^2)/(d + sqrt d)) differs from the limit by a factor sqrt(1 + 1/alpha^2)")};
}

/// Independent-estimation baselines and the O(d) advantage of simultaneous
/// estimation.
inline std::vector<CheckResult> check_independent(const Options& opt) {
  std::vector<CheckResult> out;
  double matched = 0.0;
  for (int d : {1, 2, 3, 5, 10})
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0, 9.0, 16.0, 36.0}) {
      const BoundReport direct = qcrb_independent_ecs(d, x);
      matched = std::max(matched, detail::rel_err(independent_ecs_vs_ntot(d, *direct.params.n_tot).value, direct.value));
    }
  out.push_back(detail::bounded("independent.alpha_form_vs_ntot_form", matched, opt.tol("independent.alpha_form_vs_ntot_form", 1e-12)));

  long not_below = 0;
  for (int d : {2, 5, 10})
    for (int i = 0; i <= 9900; ++i) {
      const double n = 1.0 + 0.01 * i;
      not_below += !(independent_ecs_vs_ntot(d, n).value < qcrb_independent_noon(d, n).value);
    }
  out.push_back(detail::claim("independent.ecs_below_noon", not_below));

  // Ratio at matched total photon number: the simultaneous ECS at alpha^2 =
  // 100 vs d independent ECS probes holding the same mean photon number.
  const std::vector<int> dims{4, 8, 16, 32, 64};
  std::vector<double> ratio;
  double num = 0.0;
  double den = 0.0;
  for (int d : dims) {
    const double simultaneous = minimize_bound_over_b(d, 1, 100.0).value;
    const double independent = independent_ecs_vs_ntot(d, optimal_ecs_mean_photons(d, 100.0)).value;
    ratio.push_back(independent / simultaneous);
    num += ratio.back() * d;
    den += static_cast<double>(d) * d;
  }
  const double slope = num / den;
  double residual = 0.0;
  std::ostringstream detail_text;
  detail_text << "least-squares c = " << slope << "; ratios";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    residual = std::max(residual, std::abs(ratio[i] - slope * dims[i]) / (slope * dims[i]));
    detail_text << ' ' << dims[i] << ':' << ratio[i];
  }
  out.push_back(detail::bounded("independent.linear_in_d_advantage_fit", residual, opt.tol("independent.linear_in_d_advantage_fit", 0.05),
                                detail_text.str()));
  return out;
}

inline std::vector<CheckResult> check_ziv_zakai(const Options&) {
  long not_lower = 0;
  for (double x : {4.0, 9.0, 16.0}) not_lower += !(zzb_ecs(5, x).value < zzb_noon(5, x).value);
  long second_wins = 0;
  for (double n : {1.0, 2.0, 10.0, 100.0}) {
    const auto branches = ziv_zakai_branches(50, n * n);
    second_wins += !(branches.prior_limited > branches.heisenberg);
    second_wins += zzb_noon(50, n).value != branches.prior_limited;
  }
  return {detail::claim("zzb.ecs_below_noon_d5", not_lower), detail::claim("zzb.first_branch_dominates_d50", second_wins)};
}

/// <psi|[H_j, H_k]|psi> on the standard grid, all pairs of modes 0..d.
inline std::vector<CheckResult> check_attainability(const Options& opt) {
  double worst = 0.0;
  for (const auto& pt : detail::qfim_grid()) {
    const auto psi = oracle::build_ecs_state(make_ecs(pt.d, pt.alpha_sq, pt.b, pt.m));
    for (int j = 0; j <= pt.d; ++j)
      for (int k = 0; k <= pt.d; ++k) worst = std::max(worst, std::abs(oracle::commutator_expectation(psi, j, k, pt.m)));
  }
  return {detail::bounded("attainability.commutators_vanish", worst, opt.tol("attainability.commutators_vanish", 1e-14))};
}

using CheckFn = std::function<std::vector<CheckResult>(const Options&)>;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"moments", "normalization", "qfim", "optimizer", "bounds", "all"};
  return names;
}

inline std::vector<CheckFn> suite(const std::string& name) {
  if (name == "moments") return {check_moments};
  if (name == "normalization") return {check_normalization};
  if (name == "qfim") return {check_qfim_oracle, check_structured_inverse, check_attainability};
  if (name == "optimizer") return {check_optimizer};
  if (name == "bounds") return {check_headline, check_photon_curves, check_region, check_independent, check_ziv_zakai};
  if (name == "all") {
    std::vector<CheckFn> all;
    for (const auto& part : {"moments", "normalization", "qfim", "optimizer", "bounds"}) {
      auto fns = suite(part);
      all.insert(all.end(), fns.begin(), fns.end());
    }
    return all;
  }
  throw DomainError("unknown verification suite '" + name + "'");
}

inline std::vector<CheckResult> run_suite(const std::string& name, const Options& opt) {
  std::vector<CheckResult> out;
  for (const auto& fn : suite(name)) {
    auto part = fn(opt);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace ecsqb::verify

#endif  // ECSQB_VERIFY_HPP
