#pragma once

#include <string>

#include "qpsa/types.hpp"

namespace qpsa {

/// Read a Matrix Market file (coordinate or array; real, integer or
/// complex; general, symmetric, skew-symmetric or hermitian) into a dense
/// matrix. Malformed files raise InputError naming the offending line.
ComplexMatrix read_matrix_market(const std::string& path);

/// Write a dense matrix in array format, real when all entries are real.
void write_matrix_market(const std::string& path, const ComplexMatrix& a);

}  // namespace qpsa
