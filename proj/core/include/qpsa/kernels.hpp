#pragma once

#include <optional>
#include <vector>

#include "qpsa/types.hpp"

namespace qpsa::kernels {

/// Smallest singular value of a nonempty matrix together with consistent
/// unit left/right singular vectors. Deterministic for fixed input.
SingularTriplet smallest_singular_triplet(const ComplexMatrix& a);

/// Two smallest singular values (sigma_min, sigma_next), used for
/// simplicity checks. For a single-column/row matrix sigma_next is
/// +infinity.
std::pair<double, double> two_smallest_singular_values(const ComplexMatrix& a);

struct GeneralizedEigenvalues {
  std::vector<Complex> finite;
  Index infinite_count = 0;
};

/// All finite eigenvalues of the pencil lambda*Y - X. Eigenvalues whose
/// beta falls below 1e-12 times the pencil scale are flagged infinite and
/// excluded from the finite list.
GeneralizedEigenvalues generalized_eigenvalues(const Pencil& p);

/// Reduced (thin) QR factorization A = Q R with Q^H Q = I and R upper
/// triangular. Q is rows x min(rows, cols).
std::pair<ComplexMatrix, ComplexMatrix> thin_qr(const ComplexMatrix& a);

struct OrthExtendResult {
  ComplexMatrix basis;
  bool grew = false;
};

/// Orthonormal basis of span(V, w) for V with orthonormal columns. If w
/// lies in span(V) within a relative tolerance of 1e-10, V is returned
/// unchanged with grew = false.
OrthExtendResult orth_extend(const ComplexMatrix& v, const ComplexVector& w,
                             double rel_tol = 1e-10);

/// Hermitian square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues are clipped at zero before the square root; inputs that are
/// asymmetric beyond tolerance or indefinite raise NumericalError.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& a);

/// 1 / sigma_min(M); raises NumericalError when M is numerically singular.
double operator_norm_inverse(const ComplexMatrix& m);

}  // namespace qpsa::kernels
