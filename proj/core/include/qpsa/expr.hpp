#pragma once

#include <memory>
#include <string>

#include "qpsa/polynomial.hpp"

namespace qpsa {

/// Coefficient expression tree over the grammar
///   expr   := term ('+' term)*
///   term   := factor ('*' factor)*
///   factor := number | nu<digits> | sqrt '(' expr ')' | '(' expr ')'
/// Parameters are written nu1, nu2, ... in the surface syntax.
struct CoeffExpr {
  enum class Kind { number, param, add, mul, sqrt_fn };

  Kind kind = Kind::number;
  double number = 0.0;
  Index param = 0;  // 0-based
  std::unique_ptr<CoeffExpr> lhs;
  std::unique_ptr<CoeffExpr> rhs;  // unused for sqrt_fn
};

using CoeffExprPtr = std::unique_ptr<CoeffExpr>;

/// Parse errors raise InputError with a 1-based column position.
CoeffExprPtr parse_coeff_expr(const std::string& text);

/// Canonical form that reparses to an identical tree.
std::string print_coeff_expr(const CoeffExpr& e);

bool expr_equal(const CoeffExpr& a, const CoeffExpr& b);

/// Largest parameter index referenced, or -1 for constant expressions.
Index expr_max_param(const CoeffExpr& e);

/// Compile to an evaluator with the symbolic gradient; differentiable away
/// from sqrt(0).
CoeffFn compile_coeff_expr(const CoeffExpr& e, Index dim);

CoeffExprPtr clone_expr(const CoeffExpr& e);

}  // namespace qpsa
