#include "qpsa/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpsa/kernels.hpp"
#include "qpsa/searches.hpp"

namespace qpsa {

ReducedQuadPoly compress(const QuadPoly& p, const ComplexMatrix& V) {
  p.validate();
  const Index n = p.size();
  const Index r = V.cols();
  if (V.rows() != n || r < 1) throw InputError("compress: bad subspace basis");

  ComplexMatrix stacked(n, 3 * r);
  stacked.leftCols(r) = p.M * V;
  stacked.middleCols(r, r) = p.C * V;
  stacked.rightCols(r) = p.K * V;

  auto [q, rfac] = kernels::thin_qr(stacked);
  ReducedQuadPoly out;
  out.Mhat = rfac.leftCols(r);
  out.Chat = rfac.middleCols(r, r);
  out.Khat = rfac.rightCols(r);
  out.V = V;
  out.Q = std::move(q);
  return out;
}

double membership_residual(const ReducedQuadPoly& r, const Weights& w,
                           double eps, Complex z) {
  return searches::membership_residual(r.Mhat, r.Chat, r.Khat, w, eps, z);
}

PsaOutcome criss_cross_reduced(const ReducedQuadPoly& r, const Weights& w,
                               double eps, const CrissCrossOptions& opts,
                               const std::vector<Complex>& seeds) {
  std::vector<Complex> pool = seeds;
  if (opts.initial_point) pool.push_back(*opts.initial_point);

  // rightmost membership-verified seed starts the first vertical scan
  bool found = false;
  Complex z0;
  for (const Complex& z : pool) {
    if (membership_residual(r, w, eps, z) > opts.search.tau_mem) continue;
    if (!found || z.real() > z0.real() ||
        (z.real() == z0.real() && z.imag() > z0.imag())) {
      z0 = z;
      found = true;
    }
  }
  if (!found) {
    PsaOutcome out;
    out.status = PsaStatus::empty_pseudospectrum;
    out.abscissa = -std::numeric_limits<double>::infinity();
    out.rightmost = Complex(std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
    return out;
  }

  PsaOutcome out = detail::criss_cross_blocks(r.Mhat, r.Chat, r.Khat, w, eps,
                                              z0, opts);
  out.rightmost_triplet =
      kernels::smallest_singular_triplet(r.eval(out.rightmost));
  return out;
}

std::vector<Complex> galerkin_eigenvalues(const QuadPoly& p,
                                          const ComplexMatrix& V) {
  QuadPoly proj;
  proj.M = V.adjoint() * (p.M * V);
  proj.C = V.adjoint() * (p.C * V);
  proj.K = V.adjoint() * (p.K * V);
  try {
    return polynomial_eigenvalues(proj);
  } catch (const NumericalError&) {
    return {};
  }
}

SubspacePsaOutcome subspace_psa(const QuadPoly& p, const Weights& w,
                                double eps, const SubspacePsaOptions& opts,
                                const std::vector<Complex>& extra_seeds) {
  p.validate();
  if (opts.rel_tol <= 0.0 || opts.max_iter < 1)
    throw InputError("subspace_psa: invalid options");

  const Complex z0 = rightmost_eigenvalue(p);
  const auto t0 = kernels::smallest_singular_triplet(eval_poly(p, z0));
  ComplexMatrix V = t0.v;
  V /= V.norm();

  std::vector<Complex> seeds = extra_seeds;
  seeds.push_back(z0);

  SubspacePsaOutcome out;
  double x_prev = std::numeric_limits<double>::quiet_NaN();

  for (int k = 1; k <= opts.max_iter; ++k) {
    out.iterations = k;
    out.subspace_history.push_back(V);
    const ReducedQuadPoly red = compress(p, V);

    std::vector<Complex> pool = seeds;
    for (const Complex& g : galerkin_eigenvalues(p, V)) pool.push_back(g);
    out.psa = criss_cross_reduced(red, w, eps, opts.inner, pool);
    out.V = V;
    if (out.psa.status == PsaStatus::empty_pseudospectrum) break;

    const Complex zk = out.psa.rightmost;
    out.iterates.push_back(zk);

    if (k >= 2 && std::abs(zk.real() - x_prev) <=
                      opts.rel_tol * std::max(1.0, std::abs(zk.real()))) {
      out.psa.status = PsaStatus::converged;
      break;
    }
    x_prev = zk.real();

    const auto trip = kernels::smallest_singular_triplet(eval_poly(p, zk));
    auto ext = kernels::orth_extend(V, trip.v);
    if (!ext.grew) {
      // stagnated subspace: interpolation already achieved
      out.psa.status = PsaStatus::converged;
      break;
    }
    V = std::move(ext.basis);
    seeds.push_back(zk);
  }
  return out;
}

}  // namespace qpsa
