#include "qpsa/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "qpsa/kernels.hpp"

namespace qpsa {

void Weights::validate() const {
  if (wm < 0.0 || wc < 0.0 || wk < 0.0)
    throw InputError("weights must be nonnegative");
  if (wm == 0.0 && wc == 0.0 && wk == 0.0)
    throw InputError("weights must not all be zero");
}

double scaling_pw(const Weights& w, double z) {
  const double z2 = z * z;
  return std::sqrt(w.wm * w.wm * z2 * z2 + w.wc * w.wc * z2 + w.wk * w.wk);
}

double scaling_pw_derivative(const Weights& w, double z) {
  const double pw = scaling_pw(w, z);
  if (pw == 0.0)
    throw std::domain_error("p_w'(z) undefined where p_w(z) = 0");
  return (2.0 * w.wm * w.wm * z * z * z + w.wc * w.wc * z) / pw;
}

void QuadPoly::validate() const {
  const Index n = M.rows();
  if (n < 1 || M.cols() != n || C.rows() != n || C.cols() != n ||
      K.rows() != n || K.cols() != n)
    throw InputError("QuadPoly coefficients must be square of equal size");
}

bool QuadPoly::conj_symmetric() const {
  return is_real(M) && is_real(C) && is_real(K);
}

ComplexMatrix eval_poly(const QuadPoly& p, Complex z) {
  return (z * z) * p.M + z * p.C + p.K;
}

ComplexMatrix eval_poly_derivative(const QuadPoly& p, Complex z) {
  return (2.0 * z) * p.M + p.C;
}

double membership_g(const QuadPoly& p, const Weights& w, double eps, Complex z) {
  const double smin = kernels::two_smallest_singular_values(eval_poly(p, z)).first;
  return smin - eps * scaling_pw(w, std::abs(z));
}

namespace {

// Companion pencil of the degree-trimmed polynomial. Leading coefficients
// that are exactly zero matrices are dropped so that e.g. M = 0 yields the
// linear pencil of lambda*C + K.
Pencil companion_pencil(const QuadPoly& p) {
  const Index n = p.size();
  const bool has_m = p.M.cwiseAbs().maxCoeff() > 0.0;
  const bool has_c = p.C.cwiseAbs().maxCoeff() > 0.0;
  Pencil out;
  if (has_m) {
    out.X = ComplexMatrix::Zero(2 * n, 2 * n);
    out.X.topRightCorner(n, n) = ComplexMatrix::Identity(n, n);
    out.X.bottomLeftCorner(n, n) = -p.K;
    out.X.bottomRightCorner(n, n) = -p.C;
    out.Y = ComplexMatrix::Zero(2 * n, 2 * n);
    out.Y.topLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
    out.Y.bottomRightCorner(n, n) = p.M;
  } else if (has_c) {
    out.X = -p.K;
    out.Y = p.C;
  } else {
    throw NumericalError("polynomial has no finite eigenvalues (M = C = 0)");
  }
  return out;
}

}  // namespace

std::vector<Complex> polynomial_eigenvalues(const QuadPoly& p) {
  p.validate();
  return kernels::generalized_eigenvalues(companion_pencil(p)).finite;
}

Complex rightmost_eigenvalue(const QuadPoly& p) {
  const auto eigs = polynomial_eigenvalues(p);
  if (eigs.empty())
    throw NumericalError("polynomial has no finite eigenvalues");
  double max_re = eigs.front().real();
  for (const auto& z : eigs) max_re = std::max(max_re, z.real());
  // ties on the real part within a small band break to larger imaginary part
  const double band = 1e-12 * (1.0 + std::abs(max_re));
  Complex best = eigs.front();
  bool first = true;
  for (const auto& z : eigs) {
    if (z.real() < max_re - band) continue;
    if (first || z.imag() > best.imag() ||
        (z.imag() == best.imag() && z.real() > best.real())) {
      best = z;
      first = false;
    }
  }
  return best;
}

CoeffFn CoeffFn::constant(double value, Index dim) {
  CoeffFn f;
  f.eval = [value](const RealVector&) { return value; };
  f.grad = [dim](const RealVector&) { return RealVector::Zero(dim).eval(); };
  return f;
}

CoeffFn CoeffFn::affine(double c0, double c1, Index j, Index dim) {
  CoeffFn f;
  f.eval = [c0, c1, j](const RealVector& nu) { return c0 + c1 * nu(j); };
  f.grad = [c1, j, dim](const RealVector&) {
    RealVector g = RealVector::Zero(dim);
    g(j) = c1;
    return g;
  };
  return f;
}

CoeffFn CoeffFn::sqrt_of(Index j, Index dim) {
  CoeffFn f;
  f.eval = [j](const RealVector& nu) { return std::sqrt(nu(j)); };
  f.grad = [j, dim](const RealVector& nu) {
    RealVector g = RealVector::Zero(dim);
    g(j) = 0.5 / std::sqrt(nu(j));
    return g;
  };
  return f;
}

void ParamQuadratic::validate() const {
  if (dim < 1) throw InputError("parameter dimension must be >= 1");
  if (size < 1) throw InputError("matrix size must be >= 1");
  auto check = [&](const std::vector<CoeffTerm>& terms) {
    for (const auto& t : terms)
      if (t.matrix.rows() != size || t.matrix.cols() != size)
        throw InputError("coefficient term size mismatch");
  };
  check(mass_terms);
  check(damping_terms);
  check(stiffness_terms);
}

namespace {

ComplexMatrix sum_terms(const std::vector<CoeffTerm>& terms,
                        const RealVector& nu, Index n) {
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& t : terms) acc += t.fn.eval(nu) * t.matrix;
  return acc;
}

ComplexMatrix sum_partials(const std::vector<CoeffTerm>& terms,
                           const RealVector& nu, Index j, Index n) {
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& t : terms) acc += t.fn.grad(nu)(j) * t.matrix;
  return acc;
}

}  // namespace

QuadPoly instantiate(const ParamQuadratic& family, const RealVector& nu) {
  if (nu.size() != family.dim)
    throw InputError("parameter vector has wrong dimension");
  QuadPoly p;
  p.M = sum_terms(family.mass_terms, nu, family.size);
  p.C = sum_terms(family.damping_terms, nu, family.size);
  p.K = sum_terms(family.stiffness_terms, nu, family.size);
  return p;
}

PartialMatrices partial_matrix(const ParamQuadratic& family,
                               const RealVector& nu, Index j) {
  if (j < 0 || j >= family.dim)
    throw InputError("parameter index out of range");
  PartialMatrices out;
  out.dM = sum_partials(family.mass_terms, nu, j, family.size);
  out.dC = sum_partials(family.damping_terms, nu, j, family.size);
  out.dK = sum_partials(family.stiffness_terms, nu, j, family.size);
  return out;
}

void Box::validate() const {
  if (lower.size() != upper.size() || lower.size() < 1)
    throw InputError("box bounds must have equal positive dimension");
  for (Index i = 0; i < lower.size(); ++i)
    if (lower(i) > upper(i)) throw InputError("box lower bound exceeds upper bound");
}

bool Box::contains(const RealVector& nu, double tol) const {
  if (nu.size() != dim()) return false;
  for (Index i = 0; i < dim(); ++i)
    if (nu(i) < lower(i) - tol || nu(i) > upper(i) + tol) return false;
  return true;
}

RealVector Box::clamp(const RealVector& nu) const {
  RealVector out = nu;
  for (Index i = 0; i < dim(); ++i)
    out(i) = std::min(std::max(out(i), lower(i)), upper(i));
  return out;
}

}  // namespace qpsa
