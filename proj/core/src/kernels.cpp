#include "qpsa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

// Eigen has no complex-valued generalized eigensolver; bind LAPACK's QZ.
extern "C" {
void zggev_(const char* jobvl, const char* jobvr, const int* n,
            std::complex<double>* a, const int* lda, std::complex<double>* b,
            const int* ldb, std::complex<double>* alpha,
            std::complex<double>* beta, std::complex<double>* vl,
            const int* ldvl, std::complex<double>* vr, const int* ldvr,
            std::complex<double>* work, const int* lwork, double* rwork,
            int* info);
}

namespace qpsa::kernels {

namespace {

Eigen::JacobiSVD<ComplexMatrix> jacobi_svd(const ComplexMatrix& a) {
  return Eigen::JacobiSVD<ComplexMatrix>(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Eigen::BDCSVD<ComplexMatrix> bdc_svd(const ComplexMatrix& a) {
  return Eigen::BDCSVD<ComplexMatrix>(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

constexpr Index kBdcsvdCutoff = 24;

}  // namespace

SingularTriplet smallest_singular_triplet(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0)
    throw InputError("smallest_singular_triplet: empty matrix");
  SingularTriplet t;
  const Index last = std::min(a.rows(), a.cols()) - 1;
  if (std::max(a.rows(), a.cols()) <= kBdcsvdCutoff) {
    auto svd = jacobi_svd(a);
    t.sigma = svd.singularValues()(last);
    t.u = svd.matrixU().col(last);
    t.v = svd.matrixV().col(last);
  } else {
    auto svd = bdc_svd(a);
    t.sigma = svd.singularValues()(last);
    t.u = svd.matrixU().col(last);
    t.v = svd.matrixV().col(last);
  }
  if (!std::isfinite(t.sigma))
    throw NumericalError("smallest_singular_triplet: SVD did not converge");
  return t;
}

std::pair<double, double> two_smallest_singular_values(const ComplexMatrix& a) {
  Eigen::VectorXd sv;
  if (std::max(a.rows(), a.cols()) <= kBdcsvdCutoff)
    sv = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  else
    sv = Eigen::BDCSVD<ComplexMatrix>(a).singularValues();
  const Index k = sv.size();
  if (k == 1) return {sv(0), std::numeric_limits<double>::infinity()};
  return {sv(k - 1), sv(k - 2)};
}

GeneralizedEigenvalues generalized_eigenvalues(const Pencil& p) {
  if (p.X.rows() != p.X.cols() || p.Y.rows() != p.Y.cols() ||
      p.X.rows() != p.Y.rows())
    throw InputError("generalized_eigenvalues: pencil blocks must be square and equal");
  const int n = static_cast<int>(p.X.rows());
  GeneralizedEigenvalues out;
  if (n == 0) return out;

  // Scale both blocks jointly so the infinite-eigenvalue cutoff is taken
  // against an O(1) pencil; the eigenvalues are unchanged.
  const double scale = std::max({p.X.cwiseAbs().maxCoeff(),
                                 p.Y.cwiseAbs().maxCoeff(), 1e-300});
  ComplexMatrix a = p.X / scale;
  ComplexMatrix b = p.Y / scale;

  std::vector<Complex> alpha(n), beta(n);
  std::vector<double> rwork(8 * n);
  int info = 0;
  int lwork = -1;
  Complex wkopt;
  zggev_("N", "N", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
         nullptr, &n, nullptr, &n, &wkopt, &lwork, rwork.data(), &info);
  lwork = std::max(2 * n, static_cast<int>(wkopt.real()));
  std::vector<Complex> work(lwork);
  zggev_("N", "N", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
         nullptr, &n, nullptr, &n, work.data(), &lwork, rwork.data(), &info);
  if (info != 0)
    throw NumericalError("zggev failed to converge, info = " + std::to_string(info));

  const double pencil_norm = std::hypot(a.norm(), b.norm());
  const double cutoff = 1e-12 * std::max(pencil_norm, 1.0);
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[i]) <= cutoff) {
      ++out.infinite_count;
    } else {
      out.finite.push_back(alpha[i] / beta[i]);
    }
  }
  return out;
}

std::pair<ComplexMatrix, ComplexMatrix> thin_qr(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError("thin_qr: empty matrix");
  const Index k = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), k);
  ComplexMatrix r = qr.matrixQR()
                        .topRows(k)
                        .template triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

OrthExtendResult orth_extend(const ComplexMatrix& v, const ComplexVector& w,
                             double rel_tol) {
  if (v.rows() != w.size()) throw InputError("orth_extend: size mismatch");
  const double wnorm = w.norm();
  ComplexVector r = w - v * (v.adjoint() * w);
  // one reorthogonalization pass keeps the basis orthonormal to ~1e-15
  r -= v * (v.adjoint() * r);
  const double rnorm = r.norm();
  if (wnorm == 0.0 || rnorm <= rel_tol * wnorm) return {v, false};
  ComplexMatrix out(v.rows(), v.cols() + 1);
  out.leftCols(v.cols()) = v;
  out.col(v.cols()) = r / rnorm;
  return {std::move(out), true};
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("hermitian_sqrt: matrix must be square");
  const double norm = a.norm();
  if (norm > 0.0 && (a - a.adjoint()).norm() > 1e-10 * norm)
    throw NumericalError("hermitian_sqrt: matrix is not Hermitian");
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("hermitian_sqrt: eigendecomposition failed");
  RealVector lam = es.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -1e-8 * std::max(norm, 1.0))
      throw NumericalError("hermitian_sqrt: matrix is not positive semidefinite");
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  ComplexMatrix s = es.eigenvectors() * lam.asDiagonal() *
                    es.eigenvectors().adjoint();
  return 0.5 * (s + s.adjoint());
}

double operator_norm_inverse(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("operator_norm_inverse: matrix must be square");
  Eigen::VectorXd sv;
  if (m.rows() <= kBdcsvdCutoff)
    sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  else
    sv = Eigen::BDCSVD<ComplexMatrix>(m).singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin < 1e-14 * std::max(sv(0), 1e-300))
    throw NumericalError("operator_norm_inverse: matrix is numerically singular");
  return 1.0 / smin;
}

}  // namespace qpsa::kernels
