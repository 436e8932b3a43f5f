#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpsa/objective.hpp"
#include "qpsa/optimize.hpp"
#include "qpsa/polynomial.hpp"

namespace qpsa {

struct MinimizeSfOptions {
  int eta = 0;  // initial interpolation nodes; 0 means 5 for d=1, 8 otherwise
  double outer_tol = 1e-8;
  int max_outer = 25;
  optimize::GlobalOptOptions global;
  optimize::BfgsOptions bfgs;
  ObjectiveOptions objective;
  /// Full-problem rightmost points via direct criss-cross at or below this
  /// size, via the inner subspace framework above it.
  Index direct_threshold = 40;

  int effective_eta(Index d) const { return eta > 0 ? eta : (d == 1 ? 5 : 8); }
};

struct OuterIterate {
  RealVector nu;
  double reduced_value = 0.0;  // optimal value of the reduced minimization
  double full_value = 0.0;     // alpha_eps at nu
  Complex z;                   // rightmost point of the full problem at nu
  Index subspace_dim = 0;
  bool reduced_certified = false;
};

enum class MinimizeStatus { converged, stagnated, max_outer };

struct MinimizeOutcome {
  RealVector minimizer;
  double value = 0.0;  // alpha_eps at the minimizer (full problem)
  Complex rightmost;
  std::vector<RealVector> nodes;
  std::vector<Complex> node_rightmost;
  std::vector<OuterIterate> outer_history;
  ComplexMatrix V;  // final restriction subspace
  MinimizeStatus status = MinimizeStatus::max_outer;
  std::optional<std::string> certificate;
  bool sentinel_hit = false;  // some reduced evaluation found no member seed
  int max_inner_iterations = 0;  // largest inner subspace-framework count
};

/// Equally spaced initial nodes: on the interval for d = 1, on the main
/// diagonal of the box for d >= 2; eta = 1 gives the diagonal midpoint.
std::vector<RealVector> initial_nodes(const Box& box, int eta);

/// Outer subspace framework for min over the box of alpha_eps(P(.; nu)):
/// globally minimize the reduced abscissa over the current subspace, take
/// the full problem's rightmost point at the minimizer, expand the subspace
/// with its right singular vector, and stop when consecutive reduced
/// optimal values stagnate.
MinimizeOutcome minimize_psa(const ParamQuadratic& family, const Box& box,
                             const Weights& w, double eps,
                             const MinimizeSfOptions& opts = {});

/// Iterate-repetition certificate: when an outer iterate repeats an earlier
/// one within tol componentwise, the repeated point is a global minimizer
/// (floating-point surrogate for exact repetition).
std::optional<std::string> stagnation_check(
    const std::vector<OuterIterate>& history, double tol = 1e-10);

}  // namespace qpsa
