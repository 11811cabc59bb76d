#ifndef ECSQB_ORACLE_HPP
#define ECSQB_ORACLE_HPP

// Brute-force verification layer. States of the (d+1)-mode interferometer are
// built explicitly in a truncated Fock basis and every quantity is computed
// from first principles: overlaps, generator expectations, and the QFIM via
// both the generator-covariance form and finite differences of the evolved
// state. Mode 0 is the reference beam; modes 1..d carry the phases.
//
// Truncated coherent vectors are NOT renormalized. The discarded Poisson tail
// is recorded on each ModeVector so discrepancies stay attributable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ecsqb/errors.hpp"
#include "ecsqb/moments.hpp"
#include "ecsqb/qfim.hpp"
#include "ecsqb/states.hpp"

namespace ecsqb::oracle {

using Amplitude = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-14;
inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr std::size_t kDenseTensorLimit = 2'000'000;

struct ModeVector {
  std::vector<Amplitude> amplitudes;
  double tail_mass = 0.0;  // probability mass of the intended state beyond the cutoff

  int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
};

/// sum_{n > cutoff} e^{-mu} mu^n/n! n^power.
inline double weighted_poisson_tail(double mu, int cutoff, int power = 0) {
  if (mu < 0.0 || cutoff < 0 || power < 0) throw DomainError("weighted_poisson_tail: invalid arguments");
  if (mu == 0.0) return 0.0;
  double log_weight = -mu + (cutoff + 1) * std::log(mu) - std::lgamma(cutoff + 2.0);
  double sum = 0.0;
  for (long n = cutoff + 1;; ++n) {
    const double term = std::exp(log_weight) * std::pow(static_cast<double>(n), power);
    sum += term;
    const double ratio = mu / (n + 1.0) * std::pow(1.0 + 1.0 / n, power);
    if (ratio < 1.0) {
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= 1e-3 * sum || rest < 1e-300) {
        sum += rest;  // upper bound on the remainder
        break;
      }
    }
    log_weight += std::log(mu) - std::log(n + 1.0);
  }
  return sum;
}

/// Smallest cutoff K whose n^power-weighted Poisson tail is at most
/// tail_tol * max(1, f(power, mu)).
inline int minimal_cutoff(double mu, double tail_tol, int power = 0) {
  if (!(tail_tol > 0.0)) throw DomainError("minimal_cutoff: tail_tol must be positive");
  const double scale = power == 0 ? 1.0 : std::max(1.0, coherent_number_moment(power, mu));
  int k = 0;
  while (weighted_poisson_tail(mu, k, power) > tail_tol * scale) ++k;
  return k;
}

/// Cutoff for states probed by (n^m)^2: weighted tail within budget plus a
/// 2m-level margin.
inline int auto_cutoff(double alpha_sq, int m, double tail_tol = kDefaultTailTol) {
  return minimal_cutoff(alpha_sq, tail_tol, 2 * m) + 2 * m;
}

inline ModeVector vacuum_vector(int cutoff) {
  ModeVector v{std::vector<Amplitude>(static_cast<std::size_t>(cutoff) + 1, 0.0), 0.0};
  v.amplitudes[0] = 1.0;
  return v;
}

inline ModeVector fock_vector(int n, int cutoff) {
  if (n > cutoff)
    throw CutoffError("Fock level " + std::to_string(n) + " exceeds cutoff " + std::to_string(cutoff));
  ModeVector v{std::vector<Amplitude>(static_cast<std::size_t>(cutoff) + 1, 0.0), 0.0};
  v.amplitudes[static_cast<std::size_t>(n)] = 1.0;
  return v;
}

/// Amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n = 0..cutoff.
inline ModeVector truncated_coherent(Amplitude alpha, int cutoff, double tail_tol = kDefaultTailTol) {
  if (cutoff < 0) throw CutoffError("cutoff must be nonnegative");
  const double mu = std::norm(alpha);
  const double tail = weighted_poisson_tail(mu, cutoff);
  if (tail >= tail_tol)
    throw CutoffError("cutoff " + std::to_string(cutoff) + " leaves tail mass " + std::to_string(tail) +
                      " >= " + std::to_string(tail_tol) + " for |alpha|^2 = " + std::to_string(mu) +
                      "; minimal sufficient cutoff is " + std::to_string(minimal_cutoff(mu, tail_tol)));
  ModeVector v{std::vector<Amplitude>(static_cast<std::size_t>(cutoff) + 1), tail};
  Amplitude a = std::exp(-0.5 * mu);
  v.amplitudes[0] = a;
  for (int n = 1; n <= cutoff; ++n) {
    a *= alpha / std::sqrt(static_cast<double>(n));
    v.amplitudes[static_cast<std::size_t>(n)] = a;
  }
  return v;
}

inline Amplitude overlap(const ModeVector& lhs, const ModeVector& rhs) {
  if (lhs.amplitudes.size() != rhs.amplitudes.size())
    throw ShapeMismatchError("mode vectors have different cutoffs");
  Amplitude acc = 0.0;
  for (std::size_t n = 0; n < lhs.amplitudes.size(); ++n) acc += std::conj(lhs.amplitudes[n]) * rhs.amplitudes[n];
  return acc;
}

struct ProductTerm {
  Amplitude coefficient;
  std::vector<ModeVector> factors;  // one per mode
};

/// Superposition of multimode product states.
struct SparseProductState {
  int num_modes = 0;
  int cutoff = 0;
  std::vector<ProductTerm> terms;

  double tail_mass() const {
    double worst = 0.0;
    for (const auto& t : terms)
      for (const auto& f : t.factors) worst = std::max(worst, f.tail_mass);
    return worst;
  }
};

/// Sum over term pairs of conj(c1) c2 prod_modes <f1|f2>.
inline Amplitude inner_product(const SparseProductState& lhs, const SparseProductState& rhs) {
  if (lhs.num_modes != rhs.num_modes || lhs.cutoff != rhs.cutoff)
    throw ShapeMismatchError("inner_product: states differ in mode count or cutoff");
  Amplitude acc = 0.0;
  for (const auto& a : lhs.terms) {
    for (const auto& b : rhs.terms) {
      Amplitude prod = std::conj(a.coefficient) * b.coefficient;
      for (int mode = 0; mode < lhs.num_modes && prod != 0.0; ++mode)
        prod *= overlap(a.factors[static_cast<std::size_t>(mode)], b.factors[static_cast<std::size_t>(mode)]);
      acc += prod;
    }
  }
  return acc;
}

namespace detail {

inline SparseProductState single_excitation_state(int d, int cutoff, double b, double c, const ModeVector& excited) {
  SparseProductState s{d + 1, cutoff, {}};
  const ModeVector vacuum = vacuum_vector(cutoff);
  auto add_branch = [&](int mode, double coefficient) {
    if (coefficient == 0.0) return;
    ProductTerm term{coefficient, std::vector<ModeVector>(static_cast<std::size_t>(d) + 1, vacuum)};
    term.factors[static_cast<std::size_t>(mode)] = excited;
    s.terms.push_back(std::move(term));
  };
  add_branch(0, c);
  for (int j = 1; j <= d; ++j) add_branch(j, b);
  return s;
}

}  // namespace detail

/// b sum_j |alpha>_j + c |alpha>_0 with real alpha = sqrt(alpha_sq).
/// cutoff <= 0 selects auto_cutoff(alpha_sq, m, tail_tol).
inline SparseProductState build_ecs_state(const EcsParams& p, int cutoff = 0, double tail_tol = kDefaultTailTol) {
  const EcsParams checked = validate_ecs(p);
  const int k = cutoff > 0 ? cutoff : auto_cutoff(checked.alpha_sq, checked.m, tail_tol);
  const ModeVector coherent = truncated_coherent(std::sqrt(checked.alpha_sq), k, tail_tol);
  return detail::single_excitation_state(checked.d, k, checked.b, checked.c, coherent);
}

/// b sum_j |N>_j + c |N>_0. cutoff <= 0 selects cutoff = N.
inline SparseProductState build_noon_state(const NoonParams& p, int cutoff = 0) {
  const NoonParams checked = validate_noon(p);
  const int k = cutoff > 0 ? cutoff : checked.photon_number;
  if (k < checked.photon_number)
    throw CutoffError("cutoff " + std::to_string(k) + " below photon number " +
                      std::to_string(checked.photon_number));
  return detail::single_excitation_state(checked.d, k, checked.b, checked.c, fock_vector(checked.photon_number, k));
}

/// (a^dag a)^m on one mode: amplitude n scaled by n^m. m = 0 is the identity.
inline ModeVector apply_number_power(ModeVector v, int m) {
  for (std::size_t n = 0; n < v.amplitudes.size(); ++n)
    v.amplitudes[n] *= std::pow(static_cast<double>(n), m);
  return v;
}

inline SparseProductState apply_number_power(SparseProductState s, int mode, int m) {
  if (mode < 0 || mode >= s.num_modes)
    throw DomainError("apply_number_power: mode " + std::to_string(mode) + " out of range");
  for (auto& term : s.terms) {
    auto& f = term.factors[static_cast<std::size_t>(mode)];
    f = apply_number_power(std::move(f), m);
  }
  return s;
}

/// Phase factor e^{i n^m theta} on one mode.
inline ModeVector evolve_mode(ModeVector v, int m, double theta) {
  for (std::size_t n = 0; n < v.amplitudes.size(); ++n)
    v.amplitudes[n] *= std::polar(1.0, std::pow(static_cast<double>(n), m) * theta);
  return v;
}

/// exp(i sum_j H_j theta_j) with theta[j-1] acting on mode j.
inline SparseProductState evolve(SparseProductState s, int m, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != s.num_modes - 1)
    throw ShapeMismatchError("evolve: theta must have one entry per parameterized mode");
  for (auto& term : s.terms)
    for (int j = 1; j < s.num_modes; ++j) {
      auto& f = term.factors[static_cast<std::size_t>(j)];
      f = evolve_mode(std::move(f), m, theta[static_cast<std::size_t>(j) - 1]);
    }
  return s;
}

inline double total_number_expectation(const SparseProductState& s) {
  double total = 0.0;
  for (int mode = 0; mode < s.num_modes; ++mode)
    total += inner_product(s, apply_number_power(s, mode, 1)).real();
  return total;
}

/// <psi|(H_j H_k - H_k H_j)|psi> with H = (a^dag a)^m.
template <class State>
Amplitude commutator_expectation(const State& s, int j, int k, int m) {
  const State jk = apply_number_power(apply_number_power(s, k, m), j, m);
  const State kj = apply_number_power(apply_number_power(s, j, m), k, m);
  return inner_product(s, jk) - inner_product(s, kj);
}

/// F_jk = 4 (<H_j H_k> - <H_j><H_k>) over the parameterized modes 1..d.
template <class State>
DenseMatrix qfim_from_generators(const State& s, int d, int m) {
  std::vector<State> h_psi;
  std::vector<double> mean(static_cast<std::size_t>(d));
  h_psi.reserve(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) {
    h_psi.push_back(apply_number_power(s, j, m));
    mean[static_cast<std::size_t>(j) - 1] = inner_product(s, h_psi.back()).real();
  }
  DenseMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k <= j; ++k) {
      const double second = inner_product(s, apply_number_power(h_psi[static_cast<std::size_t>(k)], j + 1, m)).real();
      f(j, k) = f(k, j) = 4.0 * (second - mean[static_cast<std::size_t>(j)] * mean[static_cast<std::size_t>(k)]);
    }
  return f;
}

inline DenseMatrix numerical_qfim(const EcsParams& p, int cutoff = 0, double tail_tol = kDefaultTailTol) {
  return qfim_from_generators(build_ecs_state(p, cutoff, tail_tol), p.d, p.m);
}

inline DenseMatrix numerical_qfim(const NoonParams& p, int cutoff = 0) {
  return qfim_from_generators(build_noon_state(p, cutoff), p.d, p.m);
}

/// Central difference of the evolved state with respect to theta_j; only
/// factor j of each term changes.
inline SparseProductState state_derivative(const SparseProductState& s, int j, int m,
                                           const std::vector<double>& theta, double step) {
  SparseProductState evolved = evolve(s, m, theta);
  const double theta_j = theta[static_cast<std::size_t>(j) - 1];
  for (std::size_t t = 0; t < evolved.terms.size(); ++t) {
    const ModeVector& base = s.terms[t].factors[static_cast<std::size_t>(j)];
    const ModeVector plus = evolve_mode(base, m, theta_j + step);
    const ModeVector minus = evolve_mode(base, m, theta_j - step);
    ModeVector& out = evolved.terms[t].factors[static_cast<std::size_t>(j)];
    for (std::size_t n = 0; n < out.amplitudes.size(); ++n)
      out.amplitudes[n] = (plus.amplitudes[n] - minus.amplitudes[n]) / (2.0 * step);
  }
  return evolved;
}

/// F_jk = 4 Re(<d_j psi|d_k psi> - <d_j psi|psi><psi|d_k psi>) at theta,
/// with derivatives by central differences.
inline DenseMatrix qfim_via_state_derivatives(const SparseProductState& s, int m, const std::vector<double>& theta,
                                              double fd_step = kDefaultFdStep) {
  if (!(fd_step >= 1e-6 && fd_step <= 1e-3)) throw DomainError("fd_step must lie in [1e-6, 1e-3]");
  const int d = s.num_modes - 1;
  const SparseProductState psi = evolve(s, m, theta);
  std::vector<SparseProductState> deriv;
  std::vector<Amplitude> proj;
  for (int j = 1; j <= d; ++j) {
    deriv.push_back(state_derivative(s, j, m, theta, fd_step));
    proj.push_back(inner_product(psi, deriv.back()));  // <psi|d_j psi>
  }
  DenseMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k <= j; ++k) {
      const Amplitude value = inner_product(deriv[static_cast<std::size_t>(j)], deriv[static_cast<std::size_t>(k)]) -
                              std::conj(proj[static_cast<std::size_t>(j)]) * proj[static_cast<std::size_t>(k)];
      f(j, k) = f(k, j) = 4.0 * value.real();
    }
  return f;
}

inline DenseMatrix qfim_via_state_derivatives(const EcsParams& p, const std::vector<double>& theta,
                                              double fd_step = kDefaultFdStep, int cutoff = 0,
                                              double tail_tol = kDefaultTailTol) {
  return qfim_via_state_derivatives(build_ecs_state(p, cutoff, tail_tol), p.m, theta, fd_step);
}

/// Full amplitude tensor over (cutoff+1)^num_modes basis states, mode 0 most
/// significant.
struct DenseTensorState {
  int num_modes = 0;
  int cutoff = 0;
  std::vector<Amplitude> amplitudes;
};

inline DenseTensorState dense_tensor_state(const SparseProductState& s) {
  const std::size_t levels = static_cast<std::size_t>(s.cutoff) + 1;
  std::size_t size = 1;
  for (int mode = 0; mode < s.num_modes; ++mode) {
    if (size > kDenseTensorLimit / levels)
      throw SizeLimitError("dense tensor of " + std::to_string(levels) + "^" + std::to_string(s.num_modes) +
                           " amplitudes exceeds the limit of " + std::to_string(kDenseTensorLimit));
    size *= levels;
  }
  DenseTensorState out{s.num_modes, s.cutoff, std::vector<Amplitude>(size, 0.0)};
  std::vector<Amplitude> scratch;
  for (const auto& term : s.terms) {
    // Kronecker product of the factors, built mode by mode.
    std::vector<Amplitude> partial{term.coefficient};
    for (const auto& factor : term.factors) {
      scratch.assign(partial.size() * levels, 0.0);
      for (std::size_t i = 0; i < partial.size(); ++i)
        for (std::size_t n = 0; n < levels; ++n) scratch[i * levels + n] = partial[i] * factor.amplitudes[n];
      partial.swap(scratch);
    }
    for (std::size_t i = 0; i < size; ++i) out.amplitudes[i] += partial[i];
  }
  return out;
}

inline DenseTensorState dense_tensor_state(const EcsParams& p, int cutoff, double tail_tol = kDefaultTailTol) {
  return dense_tensor_state(build_ecs_state(p, cutoff, tail_tol));
}

inline Amplitude inner_product(const DenseTensorState& lhs, const DenseTensorState& rhs) {
  if (lhs.num_modes != rhs.num_modes || lhs.cutoff != rhs.cutoff)
    throw ShapeMismatchError("inner_product: tensors differ in shape");
  Amplitude acc = 0.0;
  for (std::size_t i = 0; i < lhs.amplitudes.size(); ++i) acc += std::conj(lhs.amplitudes[i]) * rhs.amplitudes[i];
  return acc;
}

inline DenseTensorState apply_number_power(DenseTensorState s, int mode, int m) {
  if (mode < 0 || mode >= s.num_modes) throw DomainError("apply_number_power: mode out of range");
  const std::size_t levels = static_cast<std::size_t>(s.cutoff) + 1;
  std::size_t stride = 1;  // distance between consecutive Fock levels of `mode`
  for (int later = mode + 1; later < s.num_modes; ++later) stride *= levels;
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
    const std::size_t n = (i / stride) % levels;
    s.amplitudes[i] *= std::pow(static_cast<double>(n), m);
  }
  return s;
}

}  // namespace ecsqb::oracle

#endif  // ECSQB_ORACLE_HPP
