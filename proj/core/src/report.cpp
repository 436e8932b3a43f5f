#include "qpsa/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace qpsa::report {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string num(Complex z) {
  const double im = z.imag();
  return num(z.real()) + (im < 0.0 ? " - " : " + ") + num(std::abs(im)) + "i";
}

std::string status_string(PsaStatus s) {
  switch (s) {
    case PsaStatus::converged: return "converged";
    case PsaStatus::stalled_vertical: return "stalled-vertical";
    case PsaStatus::max_iter: return "max-iter";
    case PsaStatus::empty_pseudospectrum: return "empty-pseudospectrum";
  }
  return "unknown";
}

std::string status_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::converged: return "converged";
    case MinimizeStatus::stagnated: return "stagnated";
    case MinimizeStatus::max_outer: return "max-outer";
  }
  return "unknown";
}

void print_psa_table(std::ostream& os, const PsaOutcome& out) {
  os << "  k   x^(k)\n";
  for (std::size_t k = 0; k < out.iterates.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%3zu   %.12f\n", k, out.iterates[k].x);
    os << buf;
  }
}

void print_minimize_table(std::ostream& os, const MinimizeOutcome& out) {
  os << "  k   nu^(k)";
  os << "   |nu^(k) - nu*|   reduced value   alpha_eps(nu^(k))   dim V\n";
  for (std::size_t k = 0; k < out.outer_history.size(); ++k) {
    const auto& it = out.outer_history[k];
    os << "  " << (k + 1) << "   (";
    for (Index i = 0; i < it.nu.size(); ++i) {
      if (i) os << ", ";
      os << num(it.nu(i));
    }
    os << ")   " << num((it.nu - out.minimizer).norm()) << "   "
       << num(it.reduced_value) << "   " << num(it.full_value) << "   "
       << it.subspace_dim << "\n";
  }
}

void write_psa_csv(const std::string& path, const PsaOutcome& out) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write CSV file " + path);
  os << "k,x,z_re,z_im\n";
  char buf[128];
  for (std::size_t k = 0; k < out.iterates.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", k,
                  out.iterates[k].x, out.iterates[k].z.real(),
                  out.iterates[k].z.imag());
    os << buf;
  }
}

void write_minimize_csv(const std::string& path, const MinimizeOutcome& out) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write CSV file " + path);
  os << "k";
  const Index d = out.minimizer.size();
  for (Index i = 0; i < d; ++i) os << ",nu" << (i + 1);
  os << ",reduced_value,full_value,z_re,z_im,subspace_dim\n";
  char buf[160];
  for (std::size_t k = 0; k < out.outer_history.size(); ++k) {
    const auto& it = out.outer_history[k];
    os << (k + 1);
    for (Index i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", it.nu(i));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%td\n",
                  it.reduced_value, it.full_value, it.z.real(), it.z.imag(),
                  it.subspace_dim);
    os << buf;
  }
}

}  // namespace qpsa::report
