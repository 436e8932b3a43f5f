#pragma once

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qpsa/polynomial.hpp"
#include "qpsa/types.hpp"

// Test-only oracles, independent of the search/criss-cross implementation
// paths they check.

namespace oracle {

using qpsa::Complex;
using qpsa::ComplexMatrix;
using qpsa::Index;
using qpsa::QuadPoly;
using qpsa::RealMatrix;
using qpsa::RealVector;
using qpsa::Weights;

using Rng = std::mt19937_64;

ComplexMatrix random_complex(Rng& rng, Index rows, Index cols);
ComplexMatrix random_real(Rng& rng, Index rows, Index cols);
ComplexMatrix random_orthonormal(Rng& rng, Index rows, Index cols);

/// Random quadratic polynomial with well-conditioned mass coefficient so
/// the pseudospectrum stays bounded for moderate eps.
QuadPoly random_quad_poly(Rng& rng, Index n, bool real_coeffs = false);

/// Closed-form sigma_min for 1x1 and 2x2 matrices (|.| and the exact
/// singular value formula); falls back to SVD-free bidiagonal arithmetic
/// nowhere else, so only call for n <= 2.
double sigma_min_small(const ComplexMatrix& a);

/// sigma_min(P(z)) via the closed form for n <= 2.
double sigma_min_poly_small(const QuadPoly& p, Complex z);

/// Grid oracle for the pseudospectral abscissa of an n <= 2 polynomial:
/// classify a grid_n x grid_n grid of the box, take the rightmost inside
/// point, then refine by 1-D bisection along nearby rows. Accuracy is
/// limited by the grid only through the row spacing.
struct GridPsa {
  double abscissa;
  Complex rightmost;
};
GridPsa grid_psa_small(const QuadPoly& p, const Weights& w, double eps,
                       double re_lo, double re_hi, double im_lo, double im_hi,
                       int grid_n = 2001);

/// All roots of |p(x + iy)| = eps * p_w on a vertical line, for scalar
/// (1x1) polynomials, by dense scan plus bisection.
std::vector<double> scalar_vertical_roots(const QuadPoly& p, const Weights& w,
                                          double eps, double x, double y_lo,
                                          double y_hi, int samples = 200001);

/// Largest root of the residual on a horizontal line, scalar polynomials.
std::vector<double> scalar_horizontal_roots(const QuadPoly& p,
                                            const Weights& w, double eps,
                                            double y, double x_lo, double x_hi,
                                            int samples = 200001);

/// Central finite-difference gradient of a scalar function of nu.
RealVector fd_gradient(const std::function<double(const RealVector&)>& f,
                       const RealVector& nu, double h = 1e-6);

/// A bounding box that surely contains the eps-pseudospectrum of a small
/// polynomial (eigenvalues inflated by a safety margin).
void psa_bounding_box(const QuadPoly& p, double margin, double* re_lo,
                      double* re_hi, double* im_lo, double* im_hi);

}  // namespace oracle
