#pragma once

#include <optional>
#include <vector>

#include "qpsa/polynomial.hpp"
#include "qpsa/searches.hpp"
#include "qpsa/types.hpp"

namespace qpsa {

struct CrissCrossOptions {
  double rel_tol = 1e-12;
  int max_iter = 50;
  std::optional<Complex> initial_point;
  searches::SearchTolerances search;

  void validate() const;
};

enum class PsaStatus {
  converged,
  stalled_vertical,  // vertical scan found no crossings; estimate accepted
  max_iter,
  empty_pseudospectrum  // reduced runs only: no seed was a member
};

struct PsaIterate {
  double x = 0.0;
  Complex z;
};

/// Result of a criss-cross run: the abscissa estimate, the rightmost point
/// attaining it, and the monotone iterate history.
struct PsaOutcome {
  double abscissa = 0.0;
  Complex rightmost;
  std::vector<PsaIterate> iterates;
  PsaStatus status = PsaStatus::max_iter;
  SingularTriplet rightmost_triplet;  // of the scanned polynomial at rightmost
  /// Rightmost candidates of the final horizontal sweep; used as a cheap
  /// non-uniqueness heuristic for the rightmost point.
  std::vector<Complex> final_sweep;

  bool detected() const { return status != PsaStatus::empty_pseudospectrum; }
};

/// Criss-cross iteration for the eps-pseudospectral abscissa of a square
/// quadratic matrix polynomial. Starts at a rightmost eigenvalue unless an
/// initial point is supplied. Requires a bounded pseudospectrum.
PsaOutcome criss_cross(const QuadPoly& p, const Weights& w, double eps,
                       const CrissCrossOptions& opts = {});

namespace detail {

/// Shared criss-cross driver over the coefficient blocks of a possibly
/// rectangular quadratic matrix polynomial, started at z0 (assumed to be a
/// member of the pseudospectrum).
PsaOutcome criss_cross_blocks(const ComplexMatrix& M, const ComplexMatrix& C,
                              const ComplexMatrix& K, const Weights& w,
                              double eps, Complex z0,
                              const CrissCrossOptions& opts);

}  // namespace detail

}  // namespace qpsa
