#include "qpsa/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qpsa {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw InputError(msg.str());
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ComplexMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file " + path);

  std::string line;
  int lineno = 1;
  if (!std::getline(in, line)) fail(path, lineno, "empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    fail(path, lineno, "not a MatrixMarket matrix file");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array")
    fail(path, lineno, "unsupported format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer")
    fail(path, lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "skew-symmetric" && symmetry != "hermitian")
    fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

  auto next_data_line = [&](std::string* out) {
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t i = 0;
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size() || line[i] == '%') continue;
      *out = line;
      return true;
    }
    return false;
  };

  std::string data;
  if (!next_data_line(&data)) fail(path, lineno, "missing size line");
  std::istringstream sz(data);
  long rows = 0, cols = 0, nnz = 0;
  if (format == "coordinate") {
    if (!(sz >> rows >> cols >> nnz)) fail(path, lineno, "bad coordinate size line");
  } else {
    if (!(sz >> rows >> cols)) fail(path, lineno, "bad array size line");
  }
  if (rows < 1 || cols < 1) fail(path, lineno, "matrix dimensions must be positive");

  ComplexMatrix a = ComplexMatrix::Zero(rows, cols);
  const bool complex_field = field == "complex";

  auto read_value = [&](std::istringstream& is) {
    double re = 0.0, im = 0.0;
    if (!(is >> re)) fail(path, lineno, "missing numeric value");
    if (complex_field && !(is >> im)) fail(path, lineno, "missing imaginary part");
    return Complex(re, im);
  };
  auto mirror = [&](long i, long j, Complex v) {
    if (symmetry == "general" || i == j) return;
    if (symmetry == "symmetric") a(j, i) = v;
    if (symmetry == "skew-symmetric") a(j, i) = -v;
    if (symmetry == "hermitian") a(j, i) = std::conj(v);
  };

  if (format == "coordinate") {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(&data)) fail(path, lineno, "unexpected end of file");
      std::istringstream is(data);
      long i = 0, j = 0;
      if (!(is >> i >> j)) fail(path, lineno, "bad coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols)
        fail(path, lineno, "coordinate out of range");
      const Complex v = read_value(is);
      a(i - 1, j - 1) = v;
      mirror(i - 1, j - 1, v);
    }
  } else {
    // array format stores the full column-major matrix (lower triangle for
    // the symmetric variants)
    for (long j = 0; j < cols; ++j) {
      const long i0 = symmetry == "general" ? 0 : j;
      for (long i = i0; i < rows; ++i) {
        if (!next_data_line(&data)) fail(path, lineno, "unexpected end of file");
        std::istringstream is(data);
        const Complex v = read_value(is);
        a(i, j) = v;
        mirror(i, j, v);
      }
    }
  }
  return a;
}

void write_matrix_market(const std::string& path, const ComplexMatrix& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write matrix file " + path);
  const bool complex_field = !is_real(a);
  out << "%%MatrixMarket matrix array "
      << (complex_field ? "complex" : "real") << " general\n";
  out << a.rows() << " " << a.cols() << "\n";
  char buf[96];
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (complex_field) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", a(i, j).real(),
                      a(i, j).imag());
      } else {
        std::snprintf(buf, sizeof(buf), "%.17g\n", a(i, j).real());
      }
      out << buf;
    }
  }
  if (!out) throw InputError("failed while writing " + path);
}

}  // namespace qpsa
