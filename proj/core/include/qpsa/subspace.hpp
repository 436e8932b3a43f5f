#pragma once

#include <vector>

#include "qpsa/crisscross.hpp"
#include "qpsa/polynomial.hpp"
#include "qpsa/types.hpp"

namespace qpsa {

/// Compressed restriction of a quadratic matrix polynomial to a subspace:
/// [M V, C V, K V] = Q [Mhat, Chat, Khat] by thin QR, so that
/// sigma_min(P(z) V) = sigma_min(z^2 Mhat + z Chat + Khat) for all z.
struct ReducedQuadPoly {
  ComplexMatrix Mhat;
  ComplexMatrix Chat;
  ComplexMatrix Khat;
  ComplexMatrix V;  // n x r, orthonormal columns
  ComplexMatrix Q;  // n x min(n, 3r), orthonormal columns

  Index subspace_dim() const { return V.cols(); }
  ComplexMatrix eval(Complex z) const {
    return (z * z) * Mhat + z * Chat + Khat;
  }
  ComplexMatrix eval_derivative(Complex z) const {
    return (2.0 * z) * Mhat + Chat;
  }
};

ReducedQuadPoly compress(const QuadPoly& p, const ComplexMatrix& V);

/// sigma_min(P(z) V) / p_w(|z|) - eps for the reduced pseudospectrum.
double membership_residual(const ReducedQuadPoly& r, const Weights& w,
                           double eps, Complex z);

/// Criss-cross on the reduced polynomial. Rectangular polynomials have no
/// companion eigenvalues, so the first vertical scan starts at the
/// rightmost membership-verified seed; with no member seed the outcome
/// status is empty_pseudospectrum.
PsaOutcome criss_cross_reduced(const ReducedQuadPoly& r, const Weights& w,
                               double eps, const CrissCrossOptions& opts,
                               const std::vector<Complex>& seeds);

/// Eigenvalues of the Galerkin projection V^H P(lambda) V, used as cheap
/// heuristic seeds for reduced runs.
std::vector<Complex> galerkin_eigenvalues(const QuadPoly& p,
                                          const ComplexMatrix& V);

struct SubspacePsaOptions {
  double rel_tol = 1e-10;
  int max_iter = 30;
  CrissCrossOptions inner;
};

struct SubspacePsaOutcome {
  PsaOutcome psa;
  ComplexMatrix V;                // final restriction subspace
  std::vector<Complex> iterates;  // z^(k) after each reduced solve
  std::vector<ComplexMatrix> subspace_history;  // V used at each iteration
  int iterations = 0;

  double abscissa() const { return psa.abscissa; }
  Complex rightmost() const { return psa.rightmost; }
};

/// Subspace framework for the eps-pseudospectral abscissa: solve the
/// reduced problem, expand the restriction subspace with the right singular
/// vector at the reduced rightmost point, repeat until the abscissa
/// stagnates.
SubspacePsaOutcome subspace_psa(const QuadPoly& p, const Weights& w,
                                double eps,
                                const SubspacePsaOptions& opts = {},
                                const std::vector<Complex>& extra_seeds = {});

}  // namespace qpsa
