#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qpsa/polynomial.hpp"
#include "qpsa/types.hpp"

namespace qpsa::searches {

/// How search pencils are solved. The structured form is the 2x2-block
/// quartic itself; the deflated form eliminates the -eps*I block by a Schur
/// complement, leaving a quartic of the polynomial's column dimension whose
/// finite eigenvalues coincide. automatic picks whichever linearizes
/// smaller.
enum class PencilForm { automatic, structured, deflated };

/// Tolerances for crossing extraction. The defaults separate genuine
/// boundary crossings from QZ noise at desk scale; all are configurable.
struct SearchTolerances {
  double tau_imag = 1e-8;   // relative purely-imaginary test
  double tau_merge = 1e-9;  // crossing dedup, scaled by (1 + |y|)
  double tau_ver = 1e-6;    // membership verification, relative to eps
  double tau_mem = 1e-8;    // interval-midpoint membership, relative to p_w
  PencilForm pencil = PencilForm::automatic;
};

/// Quartic block matrix polynomial sum_{j=0}^{4} lambda^j B_j whose purely
/// imaginary eigenvalues encode boundary crossings. Trailing zero
/// coefficients are trimmed into effective_degree.
struct QuarticBlockPoly {
  std::array<ComplexMatrix, 5> coeff;
  int effective_degree = 4;

  Index block_size() const { return coeff[0].rows(); }
};

/// Boundary crossing on a scan line, with its verification residual
/// |sigma_min / p_w - eps| / eps.
struct Crossing {
  double ordinate = 0.0;
  double residual = 0.0;
};

/// Disjoint, ascending intervals [y_L, y_R] covering the cross-section of
/// the pseudospectrum with a vertical line.
struct CrossSection {
  std::vector<std::pair<double, double>> intervals;

  bool empty() const { return intervals.empty(); }
};

// The builders accept the three coefficient blocks of a (possibly
// rectangular p x q) quadratic matrix polynomial; the full square problem
// is the case p = q = n and the compressed reduced problem the case
// p = min(n, 3r), q = r.

QuarticBlockPoly build_vertical_pencil(const ComplexMatrix& M,
                                       const ComplexMatrix& C,
                                       const ComplexMatrix& K,
                                       const Weights& w, double eps, double x);

QuarticBlockPoly build_horizontal_pencil(const ComplexMatrix& M,
                                         const ComplexMatrix& C,
                                         const ComplexMatrix& K,
                                         const Weights& w, double eps,
                                         double y);

QuarticBlockPoly build_vertical_pencil(const QuadPoly& p, const Weights& w,
                                       double eps, double x);
QuarticBlockPoly build_horizontal_pencil(const QuadPoly& p, const Weights& w,
                                         double eps, double y);

/// Block-companion linearization of the trimmed block polynomial with
/// Y = diag(I, ..., I, leading coefficient). Requires effective_degree >= 1.
Pencil linearize_block_poly(const QuarticBlockPoly& q);

/// sigma_min(lambda^2 M + lambda C + K at z) / p_w(|z|) - eps.
double membership_residual(const ComplexMatrix& M, const ComplexMatrix& C,
                           const ComplexMatrix& K, const Weights& w,
                           double eps, Complex z);

/// All verified ordinates y with sigma_min(P(x + iy)) = eps p_w(|x + iy|),
/// ascending. Real coefficient blocks are mirrored so the result is exactly
/// symmetric about the real axis.
std::vector<Crossing> vertical_search(const ComplexMatrix& M,
                                      const ComplexMatrix& C,
                                      const ComplexMatrix& K, const Weights& w,
                                      double eps, double x,
                                      const SearchTolerances& tol = {});

std::vector<Crossing> vertical_search(const QuadPoly& p, const Weights& w,
                                      double eps, double x,
                                      const SearchTolerances& tol = {});

/// Pair sorted crossings into intervals whose midpoints are members;
/// isolated tangential crossings become degenerate intervals [y, y].
CrossSection assemble_cross_section(const std::vector<Crossing>& crossings,
                                    const ComplexMatrix& M,
                                    const ComplexMatrix& C,
                                    const ComplexMatrix& K, const Weights& w,
                                    double eps, double x,
                                    const SearchTolerances& tol = {});

CrossSection assemble_cross_section(const std::vector<Crossing>& crossings,
                                    const QuadPoly& p, const Weights& w,
                                    double eps, double x,
                                    const SearchTolerances& tol = {});

/// Rightmost verified abscissa x with x + iy on the pseudospectrum boundary,
/// or nothing when the horizontal line misses the set.
std::optional<double> horizontal_search(const ComplexMatrix& M,
                                        const ComplexMatrix& C,
                                        const ComplexMatrix& K,
                                        const Weights& w, double eps, double y,
                                        const SearchTolerances& tol = {});

std::optional<double> horizontal_search(const QuadPoly& p, const Weights& w,
                                        double eps, double y,
                                        const SearchTolerances& tol = {});

}  // namespace qpsa::searches
