#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qpsa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a factorization or eigensolver does not converge.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed or inconsistent user input (files, dimensions, options).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Smallest singular value of A with a consistent pair of unit singular
/// vectors: A v = sigma u and A^H u = sigma v.
struct SingularTriplet {
  double sigma = 0.0;
  ComplexVector u;
  ComplexVector v;
};

/// Matrix pencil lambda*Y - X. Carrier for linearized matrix polynomials.
struct Pencil {
  ComplexMatrix X;
  ComplexMatrix Y;
};

inline bool is_real(const ComplexMatrix& a, double tol = 0.0) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (std::abs(a(i, j).imag()) > tol) return false;
  return true;
}

}  // namespace qpsa
