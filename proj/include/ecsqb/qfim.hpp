#ifndef ECSQB_QFIM_HPP
#define ECSQB_QFIM_HPP

// Quantum Fisher information matrix of the generalized ECS/NOON states under
// the local generators H_j = (a_j^dag a_j)^m. Both families give a matrix of
// the form gamma (1 + omega I), where I is the all-ones matrix, so inversion
// and trace are closed-form.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "ecsqb/errors.hpp"
#include "ecsqb/moments.hpp"
#include "ecsqb/states.hpp"

namespace ecsqb {

using DenseMatrix = Eigen::MatrixXd;

/// gamma (1 + omega I) of dimension d.
struct StructuredQfim {
  int d = 1;
  double gamma = 0.0;
  double omega = 0.0;

  double diagonal() const { return gamma * (1.0 + omega); }
  double off_diagonal() const { return gamma * omega; }
  double trace() const { return d * diagonal(); }

  /// Eigenvalues are gamma (mult. d-1) and gamma (1 + omega d).
  bool is_positive_definite() const { return gamma > 0.0 && 1.0 + omega * d > 0.0; }
};

inline DenseMatrix to_dense(const StructuredQfim& f) {
  DenseMatrix out = DenseMatrix::Constant(f.d, f.d, f.off_diagonal());
  out.diagonal().setConstant(f.diagonal());
  return out;
}

/// Recovers (gamma, omega) from a dense matrix of the structured form using
/// the diagonal and off-diagonal means. For d = 1 omega is reported as 0.
inline StructuredQfim fit_structure(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("fit_structure: need a square matrix");
  const auto d = static_cast<int>(m.rows());
  const double diag_mean = m.diagonal().mean();
  if (d == 1) return {1, diag_mean, 0.0};
  const double off_mean = (m.sum() - m.trace()) / (static_cast<double>(d) * (d - 1));
  const double gamma = diag_mean - off_mean;
  return {d, gamma, off_mean / gamma};
}

/// [gamma (1 + omega I)]^{-1} = (1/gamma)(1 - omega/(1 + omega d) I).
inline StructuredQfim qfim_inverse(const StructuredQfim& f) {
  if (f.gamma == 0.0) throw SingularityError("qfim_inverse: gamma = 0");
  const double denom = 1.0 + f.omega * f.d;
  if (std::abs(denom) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f.omega * f.d)))
    throw SingularityError("qfim_inverse: 1 + omega d = 0 (b^2 = g/d), total-variance bound diverges");
  return {f.d, 1.0 / f.gamma, -f.omega / denom};
}

/// F_jk = 4[delta_jk b^2 f(2m) - b^4 f(m)^2].
inline StructuredQfim ecs_qfim(const EcsParams& p) {
  if (p.d < 1 || p.m < 1) throw DomainError("ecs_qfim: need d >= 1 and m >= 1");
  if (!(p.alpha_sq > 0.0)) throw DegenerateError("ecs_qfim: alpha_sq must be positive");
  if (p.b == 0.0) throw DegenerateError("ecs_qfim: b = 0 gives the zero matrix");
  const double b_sq = p.b * p.b;
  const double fm = coherent_number_moment(p.m, p.alpha_sq);
  const double f2m = coherent_number_moment(2 * p.m, p.alpha_sq);
  return {p.d, 4.0 * b_sq * f2m, -b_sq * fm * fm / f2m};
}

/// NOON branches are Fock states, so <H_j> = b^2 N^m and <H_j H_k> = delta_jk b^2 N^{2m}.
inline StructuredQfim noon_qfim(const NoonParams& p) {
  if (p.d < 1 || p.m < 1 || p.photon_number < 1) throw DomainError("noon_qfim: invalid parameters");
  if (p.b == 0.0) throw DegenerateError("noon_qfim: b = 0 gives the zero matrix");
  const double n_2m = std::pow(static_cast<double>(p.photon_number), 2 * p.m);
  return {p.d, 4.0 * p.b * p.b * n_2m, -p.b * p.b};
}

/// Tr(F^{-1}) = d/(4 f(2m)) (1/b^2 + 1/(g - b^2 d)), for 0 < b^2 < g/d.
inline double trace_inverse_bound(int d, int m, double alpha_sq, double b_sq) {
  if (!(b_sq > 0.0)) throw DegenerateError("trace_inverse_bound: b = 0, no signal photons");
  const double g = moment_ratio(m, alpha_sq);
  const double gap = g - b_sq * d;
  if (!(gap > 0.0)) throw SingularityError("trace_inverse_bound: b^2 >= g/d");
  const double f2m = coherent_number_moment(2 * m, alpha_sq);
  return d / (4.0 * f2m) * (1.0 / b_sq + 1.0 / gap);
}

inline double trace_inverse_bound(const EcsParams& p) {
  return trace_inverse_bound(p.d, p.m, p.alpha_sq, p.b * p.b);
}

/// Tr(F^{-1}) for the NOON family: d/(4 N^{2m}) (1/b^2 + 1/(1 - d b^2)).
inline double noon_trace_inverse(int d, double photon_number, int m, double b_sq) {
  if (!(b_sq > 0.0)) throw DegenerateError("noon_trace_inverse: b = 0");
  const double gap = 1.0 - d * b_sq;
  if (!(gap > 0.0)) throw SingularityError("noon_trace_inverse: b^2 >= 1/d");
  return d / (4.0 * std::pow(photon_number, 2 * m)) * (1.0 / b_sq + 1.0 / gap);
}

/// det F / Tr F, the effective single-parameter QFI when d = 2.
inline double effective_qfi_2param(const DenseMatrix& f) {
  if (f.rows() != 2 || f.cols() != 2)
    throw DimensionError("effective_qfi_2param: requires a 2x2 matrix, got " +
                         std::to_string(f.rows()) + "x" + std::to_string(f.cols()));
  return f.determinant() / f.trace();
}

/// General dense inverse (full-pivot LU).
inline DenseMatrix dense_inverse(const DenseMatrix& f) {
  Eigen::FullPivLU<DenseMatrix> lu(f);
  if (!lu.isInvertible()) throw SingularityError("dense_inverse: matrix is singular");
  return lu.inverse();
}

inline bool is_symmetric(const DenseMatrix& f, double tol = 1e-12) {
  return f.rows() == f.cols() && (f - f.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ecsqb

#endif  // ECSQB_QFIM_HPP
