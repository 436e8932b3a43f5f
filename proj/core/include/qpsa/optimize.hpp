#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qpsa/polynomial.hpp"
#include "qpsa/types.hpp"

namespace qpsa::optimize {

/// One objective sample. A missing gradient downgrades the support
/// function to the value-only Lipschitz form.
struct ObjectiveSample {
  double value = 0.0;
  std::optional<RealVector> gradient;
};

using Evaluator = std::function<ObjectiveSample(const RealVector&)>;

struct GlobalOptOptions {
  double gamma = -100.0;     // lower bound on the objective curvature, < 0
  double gap_tol = 1e-8;     // terminate when best f - min envelope <= gap_tol
  int max_evals = 5000;
  double lipschitz_cap = 1e3;  // G for gradient-free support functions
  bool relative_gap = false;   // interpret gap_tol relative to max(1, |best f|)
  /// Initial evaluation points; the box midpoint when empty.
  std::vector<RealVector> initial_points;
  /// Refine the incumbent by BFGS once the envelope gap falls under
  /// polish_trigger (and again on stall). Polish evaluations enter the
  /// envelope like any other, so the certificate semantics are unchanged;
  /// this pins minimizers well below the value-gap resolution and inside
  /// long flat valleys that certification-driven sampling localizes slowly.
  bool polish = true;
  double polish_trigger = 1e-4;

  void validate() const;
};

struct EvalRecord {
  RealVector nu;
  double value = 0.0;
};

enum class OptStatus {
  certified,       // gap certificate reached
  max_evals,       // budget exhausted, best-so-far returned uncertified
  stalled,         // envelope minimizer repeated an evaluated point
  line_search,     // BFGS: weak-Wolfe search failed
  small_direction  // BFGS: direction norm below tolerance
};

struct OptRun {
  RealVector minimizer;
  double value = 0.0;
  std::optional<double> certified_gap;  // d <= 2 global runs only
  std::vector<EvalRecord> evals;
  OptStatus status = OptStatus::max_evals;
};

/// Global minimization over a box for d in {1, 2} via a lower envelope of
/// support quadratics q_k(nu) = f_k + g_k.(nu - nu_k) + (gamma/2)|nu - nu_k|^2:
/// repeatedly minimize the envelope (exactly for d = 1, by certified
/// branch-and-bound for d = 2), evaluate there, and add a new support until
/// the incumbent-envelope gap falls under gap_tol.
OptRun global_minimize(const Evaluator& f, const Box& box,
                       const GlobalOptOptions& opts = {});

struct BfgsOptions {
  double tol = 1e-8;  // direction-norm termination
  int max_iter = 200;
  double c1 = 1e-4;  // sufficient decrease
  double c2 = 0.5;   // curvature condition
};

/// BFGS with a weak-Wolfe bisection line search, trial points projected
/// into the box. Local method, no global certificate.
OptRun bfgs_minimize(const Evaluator& f, const Box& box,
                     const RealVector& start, const BfgsOptions& opts = {});

}  // namespace qpsa::optimize
