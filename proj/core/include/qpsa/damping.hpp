#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpsa/crisscross.hpp"
#include "qpsa/polynomial.hpp"

namespace qpsa::damping {

/// One damper: a positive semidefinite geometry matrix (rank-one position
/// or difference-row form) whose viscosity is bound to a parameter.
struct MsdDamper {
  ComplexMatrix matrix;
  Index param = 0;  // 0-based index of the viscosity parameter
};

/// Rank-one damper e_j e_j^T acting on mass j (0-based).
MsdDamper damper_at_mass(Index n, Index mass, Index param);

/// Damper R^T R for rows connecting mass pairs (a, b) with +1/-1 entries.
MsdDamper damper_between_masses(Index n,
                                const std::vector<std::pair<Index, Index>>& rows,
                                Index param);

/// Mass-spring-damper model: diagonal masses, tridiagonal springs, internal
/// damping 2 xi M^(1/2) sqrt(M^(-1/2) K M^(-1/2)) M^(1/2), and external
/// dampers with parameter-bound viscosities. An optional spring-scale
/// parameter multiplies K by nu_j and the internal damping by sqrt(nu_j).
struct MsdSpec {
  Index n = 0;
  RealVector masses;
  double spring_off = 0.0;
  double spring_diag = 0.0;
  double xi = 0.0;
  std::vector<MsdDamper> dampers;
  Index dim = 1;
  std::optional<Index> spring_scale_param;
};

/// C_int = 2 xi M^(1/2) sqrt(M^(-1/2) K M^(-1/2)) M^(1/2) for symmetric
/// positive definite M, K.
ComplexMatrix internal_damping(const ComplexMatrix& M, const ComplexMatrix& K,
                               double xi);

/// Assemble the parameter-dependent family of an MsdSpec. Checks that K is
/// positive definite and C(nu) positive semidefinite on nu >= 0.
ParamQuadratic msd_family(const MsdSpec& spec);

enum class ExampleName { ex5_1, ex5_2, ex5_3, ex5_4a, ex5_4b, ex6_2 };

struct ExampleProblem {
  ParamQuadratic family;
  Box box;
  Weights weights;
  double epsilon = 0.0;
  std::string label;
};

/// Benchmark damping problems. ex5_3 takes n in {80, 200, 400, 1200, 1400}
/// and a weights variant: unit (1,1,1) or u = (0.7,1,0).
ExampleProblem build_example(ExampleName name, Index n = 0,
                             bool unit_weights = true);

std::optional<ExampleName> example_from_string(const std::string& s);

/// Companion linearization A = [[-M^{-1}C, -M^{-1}K], [I, 0]] together with
/// the operator norm of M^{-1}.
struct Linearization {
  ComplexMatrix A;
  double minv_norm = 0.0;
};

Linearization companion_matrix(const QuadPoly& p);

/// Pseudospectral abscissa of a matrix: max Re z with sigma_min(A - zI) <=
/// eps, computed by the criss-cross on the degenerate quadratic
/// (M, C, K) = (0, -I, A) with weights (0, 0, 1).
PsaOutcome matrix_psa(const ComplexMatrix& A, double eps,
                      const CrissCrossOptions& opts = {});

/// Degenerate quadratic family whose "stiffness" is the companion
/// linearization A(nu); requires a parameter-independent invertible mass
/// coefficient. Feeding it to eval_full/minimize machinery minimizes the
/// matrix pseudospectral abscissa of A(nu).
ParamQuadratic linearization_family(const ParamQuadratic& family);

struct ContainmentReport {
  Index samples = 0;
  Index violations = 0;
  double max_excess = 0.0;  // most positive sigma_min(A - zI) - eps_bar seen
};

/// Sample members of the polynomial pseudospectrum at nu (boundary
/// crossings plus interior points of vertical cross-sections) and check
/// each against sigma_min(A(nu) - zI) <= eps ||M^{-1}|| + 1e-10.
ContainmentReport containment_probe(const ParamQuadratic& family,
                                    const RealVector& nu, double eps,
                                    Index target_samples,
                                    const Weights& w = {0.0, 1.0, 1.0});

}  // namespace qpsa::damping
