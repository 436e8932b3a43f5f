#pragma once

#include <vector>

#include "qpsa/crisscross.hpp"
#include "qpsa/polynomial.hpp"
#include "qpsa/subspace.hpp"

namespace qpsa {

enum class PsaStrategy { direct_crisscross, subspace };

/// Checkable surrogates for the smoothness hypotheses of the abscissa
/// function: gap of the two smallest singular values at the rightmost
/// point, non-vanishing scaling function, and a tie heuristic over the
/// final horizontal sweep.
struct SmoothnessFlags {
  bool simple_sigma = false;
  bool unique_rightmost_heuristic = false;
  bool pw_positive = false;
};

struct ObjectiveEval {
  double value = 0.0;
  RealVector gradient;
  bool gradient_valid = false;
  Complex rightmost;
  double multiplier = 0.0;
  SingularTriplet triplet;
  SmoothnessFlags flags;
  bool empty_reduced = false;  // reduced pseudospectrum was not detected
  PsaOutcome psa;
};

struct ObjectiveOptions {
  PsaStrategy strategy = PsaStrategy::direct_crisscross;
  CrissCrossOptions crisscross;
  SubspacePsaOptions subspace;
  double sentinel = -1e6;      // value reported for empty reduced sets
  double sigma_gap_tol = 1e-8; // relative gap for the simple-sigma flag
};

/// alpha_eps as a function of nu with the analytic gradient assembled from
/// the singular triplet at the rightmost point and the Lagrange multiplier
/// of the constrained-maximization form.
ObjectiveEval eval_full(const ParamQuadratic& family, const RealVector& nu,
                        const Weights& w, double eps,
                        const ObjectiveOptions& opts = {});

/// Reduced abscissa alpha^V_eps at nu for a fixed restriction basis V,
/// using the supplied seed pool for the reduced criss-cross. An undetected
/// reduced pseudospectrum yields the sentinel value with a zero gradient.
ObjectiveEval eval_reduced(const ParamQuadratic& family, const RealVector& nu,
                           const ComplexMatrix& V, const Weights& w,
                           double eps, const std::vector<Complex>& seeds,
                           const ObjectiveOptions& opts = {});

}  // namespace qpsa
