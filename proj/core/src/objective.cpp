#include "qpsa/objective.hpp"

#include <cmath>

#include "qpsa/kernels.hpp"

namespace qpsa {

namespace {

constexpr double kDenominatorFloor = 1e-12;

bool unique_rightmost_from_sweep(const std::vector<Complex>& sweep,
                                 Complex rightmost, bool conj_symmetric) {
  const double x = rightmost.real();
  const double band = 1e-9 * std::max(1.0, std::abs(x));
  int distinct = 0;
  std::vector<double> seen;
  for (const Complex& c : sweep) {
    if (c.real() < x - band) continue;
    double y = c.imag();
    if (conj_symmetric) y = std::abs(y);
    bool dup = false;
    for (double s : seen)
      if (std::abs(s - y) <= 1e-6 * (1.0 + std::abs(y))) dup = true;
    if (dup) continue;
    seen.push_back(y);
    ++distinct;
  }
  return distinct <= 1;
}

// Multiplier of Theorem 2.4 / its reduced analogue. The denominator takes
// Re(u^* P'(z) v) of the scanned polynomial minus the scaling-function
// correction; a vanishing denominator or p_w withholds the gradient.
bool lagrange_multiplier(double re_upv, Complex z, const Weights& w,
                         double eps, double* mu) {
  const double az = std::abs(z);
  if (az <= 0.0) return false;
  const double pw = scaling_pw(w, az);
  if (pw <= 1e-14) return false;
  const double denom =
      re_upv - eps * (z.real() / az) * scaling_pw_derivative(w, az);
  if (std::abs(denom) <= kDenominatorFloor) return false;
  *mu = 1.0 / denom;
  return true;
}

RealVector assemble_gradient(const ParamQuadratic& family,
                             const RealVector& nu, Complex z, double mu,
                             const ComplexVector& u, const ComplexVector& v) {
  RealVector g(family.dim);
  for (Index j = 0; j < family.dim; ++j) {
    const auto part = partial_matrix(family, nu, j);
    const Complex val =
        u.dot(((z * z) * part.dM + z * part.dC + part.dK) * v);
    g(j) = -mu * val.real();
  }
  return g;
}

}  // namespace

ObjectiveEval eval_full(const ParamQuadratic& family, const RealVector& nu,
                        const Weights& w, double eps,
                        const ObjectiveOptions& opts) {
  const QuadPoly p = instantiate(family, nu);
  ObjectiveEval out;

  if (opts.strategy == PsaStrategy::direct_crisscross) {
    out.psa = criss_cross(p, w, eps, opts.crisscross);
  } else {
    auto sub = subspace_psa(p, w, eps, opts.subspace);
    out.psa = sub.psa;
  }

  Complex z = out.psa.rightmost;
  if (p.conj_symmetric() && z.imag() < 0.0) z = std::conj(z);  // canonical rep
  out.rightmost = z;
  out.value = z.real();

  const ComplexMatrix pz = eval_poly(p, z);
  out.triplet = kernels::smallest_singular_triplet(pz);
  const auto [s1, s2] = kernels::two_smallest_singular_values(pz);
  out.flags.simple_sigma = (s2 - s1) > opts.sigma_gap_tol * std::max(s2, 1e-300);
  out.flags.pw_positive = scaling_pw(w, std::abs(z)) > 1e-14;
  out.flags.unique_rightmost_heuristic = unique_rightmost_from_sweep(
      out.psa.final_sweep, z, p.conj_symmetric());

  out.gradient = RealVector::Zero(family.dim);
  if (out.flags.simple_sigma && out.flags.pw_positive) {
    const Complex re_upv_c =
        out.triplet.u.dot(eval_poly_derivative(p, z) * out.triplet.v);
    double mu = 0.0;
    if (lagrange_multiplier(re_upv_c.real(), z, w, eps, &mu)) {
      out.multiplier = mu;
      out.gradient = assemble_gradient(family, nu, z, mu, out.triplet.u,
                                       out.triplet.v);
      out.gradient_valid = true;
    }
  }
  return out;
}

ObjectiveEval eval_reduced(const ParamQuadratic& family, const RealVector& nu,
                           const ComplexMatrix& V, const Weights& w,
                           double eps, const std::vector<Complex>& seeds,
                           const ObjectiveOptions& opts) {
  const QuadPoly p = instantiate(family, nu);
  const ReducedQuadPoly red = compress(p, V);

  std::vector<Complex> pool = seeds;
  for (const Complex& g : galerkin_eigenvalues(p, V)) pool.push_back(g);

  ObjectiveEval out;
  out.psa = criss_cross_reduced(red, w, eps, opts.crisscross, pool);
  out.gradient = RealVector::Zero(family.dim);
  if (out.psa.status == PsaStatus::empty_pseudospectrum) {
    out.empty_reduced = true;
    out.value = opts.sentinel;
    out.rightmost = out.psa.rightmost;
    return out;
  }

  const bool sym = is_real(red.Mhat) && is_real(red.Chat) && is_real(red.Khat);
  Complex z = out.psa.rightmost;
  if (sym && z.imag() < 0.0) z = std::conj(z);
  out.rightmost = z;
  out.value = z.real();

  const ComplexMatrix rz = red.eval(z);
  out.triplet = kernels::smallest_singular_triplet(rz);
  const auto [s1, s2] = kernels::two_smallest_singular_values(rz);
  out.flags.simple_sigma = (s2 - s1) > opts.sigma_gap_tol * std::max(s2, 1e-300);
  out.flags.pw_positive = scaling_pw(w, std::abs(z)) > 1e-14;
  out.flags.unique_rightmost_heuristic =
      unique_rightmost_from_sweep(out.psa.final_sweep, z, sym);

  if (out.flags.simple_sigma && out.flags.pw_positive) {
    const Complex re_upv_c =
        out.triplet.u.dot(red.eval_derivative(z) * out.triplet.v);
    double mu = 0.0;
    if (lagrange_multiplier(re_upv_c.real(), z, w, eps, &mu)) {
      out.multiplier = mu;
      // gradient through the full partials restricted to the subspace:
      // -mu * Re(u^* (z^2 dM + z dC + dK) V v) with u = Q uhat
      const ComplexVector u_full = red.Q * out.triplet.u;
      const ComplexVector vv = V * out.triplet.v;
      RealVector g(family.dim);
      for (Index j = 0; j < family.dim; ++j) {
        const auto part = partial_matrix(family, nu, j);
        const Complex val =
            u_full.dot(((z * z) * part.dM + z * part.dC + part.dK) * vv);
        g(j) = -mu * val.real();
      }
      out.gradient = std::move(g);
      out.gradient_valid = true;
    }
  }
  return out;
}

}  // namespace qpsa
