#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qpsa/types.hpp"

namespace qpsa {

/// Nonnegative weights (w_m, w_c, w_k) attached to perturbations of the
/// mass, damping and stiffness coefficients.
struct Weights {
  double wm = 1.0;
  double wc = 1.0;
  double wk = 1.0;

  void validate() const;
};

/// Value of the scaling function p_w(z) = sqrt(wm^2 z^4 + wc^2 z^2 + wk^2).
double scaling_pw(const Weights& w, double z);

/// Derivative p_w'(z) = (2 wm^2 z^3 + wc^2 z) / p_w(z); throws
/// std::domain_error when p_w(z) = 0.
double scaling_pw_derivative(const Weights& w, double z);

/// One concrete quadratic matrix polynomial P(lambda) = lambda^2 M + lambda C + K.
struct QuadPoly {
  ComplexMatrix M;
  ComplexMatrix C;
  ComplexMatrix K;

  Index size() const { return M.rows(); }
  void validate() const;
  /// True when all three coefficients are entrywise real, in which case the
  /// pseudospectrum is symmetric with respect to the real axis.
  bool conj_symmetric() const;
};

ComplexMatrix eval_poly(const QuadPoly& p, Complex z);
ComplexMatrix eval_poly_derivative(const QuadPoly& p, Complex z);

/// sigma_min(P(z)) - eps * p_w(|z|); z lies in the eps-pseudospectrum iff
/// the value is <= 0.
double membership_g(const QuadPoly& p, const Weights& w, double eps, Complex z);

/// A rightmost finite eigenvalue of P via the companion pencil
/// X = [[-C, -K], [I, 0]], Y = diag(M, I); the pencil degree-trims when
/// M = 0. Ties on the real part are broken by larger imaginary part.
Complex rightmost_eigenvalue(const QuadPoly& p);

/// All finite eigenvalues of P (companion pencil, degree-trimmed).
std::vector<Complex> polynomial_eigenvalues(const QuadPoly& p);

/// Scalar coefficient function with user-supplied gradient.
struct CoeffFn {
  std::function<double(const RealVector&)> eval;
  std::function<RealVector(const RealVector&)> grad;

  static CoeffFn constant(double value, Index dim);
  /// c0 + c1 * nu_j (j is 0-based).
  static CoeffFn affine(double c0, double c1, Index j, Index dim);
  /// sqrt(nu_j) with gradient 1/(2 sqrt(nu_j)).
  static CoeffFn sqrt_of(Index j, Index dim);
};

/// Coefficient family: a fixed matrix times a scalar coefficient function.
struct CoeffTerm {
  CoeffFn fn;
  ComplexMatrix matrix;
};

/// Parameter-dependent quadratic matrix polynomial
/// P(lambda; nu) = lambda^2 M(nu) + lambda C(nu) + K(nu) with each
/// coefficient a sum of fixed matrices times scalar functions of nu.
struct ParamQuadratic {
  std::vector<CoeffTerm> mass_terms;
  std::vector<CoeffTerm> damping_terms;
  std::vector<CoeffTerm> stiffness_terms;
  Index dim = 1;   // parameter dimension d
  Index size = 0;  // matrix size n

  void validate() const;
};

QuadPoly instantiate(const ParamQuadratic& family, const RealVector& nu);

struct PartialMatrices {
  ComplexMatrix dM;
  ComplexMatrix dC;
  ComplexMatrix dK;
};

/// Partial derivatives (dM/dnu_j, dC/dnu_j, dK/dnu_j) at nu (j is 0-based).
PartialMatrices partial_matrix(const ParamQuadratic& family,
                               const RealVector& nu, Index j);

/// Axis-aligned box of permissible parameter values.
struct Box {
  RealVector lower;
  RealVector upper;

  Index dim() const { return lower.size(); }
  void validate() const;
  bool contains(const RealVector& nu, double tol = 0.0) const;
  RealVector clamp(const RealVector& nu) const;
};

}  // namespace qpsa
