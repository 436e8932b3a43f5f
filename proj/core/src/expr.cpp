#include "qpsa/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace qpsa {

namespace {

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  CoeffExprPtr parse() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression parse error at column " << (pos_ + 1) << ": " << what;
    throw InputError(msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  CoeffExprPtr parse_expr() {
    auto e = parse_term();
    while (consume('+')) {
      auto node = std::make_unique<CoeffExpr>();
      node->kind = CoeffExpr::Kind::add;
      node->lhs = std::move(e);
      node->rhs = parse_term();
      e = std::move(node);
    }
    return e;
  }

  CoeffExprPtr parse_term() {
    auto e = parse_factor();
    while (consume('*')) {
      auto node = std::make_unique<CoeffExpr>();
      node->kind = CoeffExpr::Kind::mul;
      node->lhs = std::move(e);
      node->rhs = parse_factor();
      e = std::move(node);
    }
    return e;
  }

  CoeffExprPtr parse_factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a factor");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
        c == '+') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("unexpected character");
  }

  CoeffExprPtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto node = std::make_unique<CoeffExpr>();
    node->kind = CoeffExpr::Kind::number;
    node->number = v;
    return node;
  }

  CoeffExprPtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "sqrt") {
      if (!consume('(')) fail("expected '(' after sqrt");
      auto node = std::make_unique<CoeffExpr>();
      node->kind = CoeffExpr::Kind::sqrt_fn;
      node->lhs = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return node;
    }
    if (name == "nu") {
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected parameter index after 'nu'");
      Index idx = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        idx = idx * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      if (idx < 1) fail("parameter indices start at nu1");
      auto node = std::make_unique<CoeffExpr>();
      node->kind = CoeffExpr::Kind::param;
      node->param = idx - 1;
      return node;
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

void print_rec(const CoeffExpr& e, std::ostream& os) {
  switch (e.kind) {
    case CoeffExpr::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.number);
      os << buf;
      break;
    }
    case CoeffExpr::Kind::param:
      os << "nu" << (e.param + 1);
      break;
    case CoeffExpr::Kind::add:
      os << '(';
      print_rec(*e.lhs, os);
      os << " + ";
      print_rec(*e.rhs, os);
      os << ')';
      break;
    case CoeffExpr::Kind::mul:
      os << '(';
      print_rec(*e.lhs, os);
      os << " * ";
      print_rec(*e.rhs, os);
      os << ')';
      break;
    case CoeffExpr::Kind::sqrt_fn:
      os << "sqrt(";
      print_rec(*e.lhs, os);
      os << ')';
      break;
  }
}

double eval_rec(const CoeffExpr& e, const RealVector& nu) {
  switch (e.kind) {
    case CoeffExpr::Kind::number:
      return e.number;
    case CoeffExpr::Kind::param:
      return nu(e.param);
    case CoeffExpr::Kind::add:
      return eval_rec(*e.lhs, nu) + eval_rec(*e.rhs, nu);
    case CoeffExpr::Kind::mul:
      return eval_rec(*e.lhs, nu) * eval_rec(*e.rhs, nu);
    case CoeffExpr::Kind::sqrt_fn:
      return std::sqrt(eval_rec(*e.lhs, nu));
  }
  return 0.0;
}

void grad_rec(const CoeffExpr& e, const RealVector& nu, double factor,
              RealVector& out) {
  switch (e.kind) {
    case CoeffExpr::Kind::number:
      break;
    case CoeffExpr::Kind::param:
      out(e.param) += factor;
      break;
    case CoeffExpr::Kind::add:
      grad_rec(*e.lhs, nu, factor, out);
      grad_rec(*e.rhs, nu, factor, out);
      break;
    case CoeffExpr::Kind::mul:
      grad_rec(*e.lhs, nu, factor * eval_rec(*e.rhs, nu), out);
      grad_rec(*e.rhs, nu, factor * eval_rec(*e.lhs, nu), out);
      break;
    case CoeffExpr::Kind::sqrt_fn:
      grad_rec(*e.lhs, nu, factor * 0.5 / std::sqrt(eval_rec(*e.lhs, nu)), out);
      break;
  }
}

}  // namespace

CoeffExprPtr parse_coeff_expr(const std::string& text) {
  return Parser(text).parse();
}

std::string print_coeff_expr(const CoeffExpr& e) {
  std::ostringstream os;
  print_rec(e, os);
  return os.str();
}

bool expr_equal(const CoeffExpr& a, const CoeffExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case CoeffExpr::Kind::number:
      return a.number == b.number;
    case CoeffExpr::Kind::param:
      return a.param == b.param;
    case CoeffExpr::Kind::add:
    case CoeffExpr::Kind::mul:
      return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
    case CoeffExpr::Kind::sqrt_fn:
      return expr_equal(*a.lhs, *b.lhs);
  }
  return false;
}

Index expr_max_param(const CoeffExpr& e) {
  switch (e.kind) {
    case CoeffExpr::Kind::number:
      return -1;
    case CoeffExpr::Kind::param:
      return e.param;
    case CoeffExpr::Kind::add:
    case CoeffExpr::Kind::mul:
      return std::max(expr_max_param(*e.lhs), expr_max_param(*e.rhs));
    case CoeffExpr::Kind::sqrt_fn:
      return expr_max_param(*e.lhs);
  }
  return -1;
}

CoeffExprPtr clone_expr(const CoeffExpr& e) {
  auto out = std::make_unique<CoeffExpr>();
  out->kind = e.kind;
  out->number = e.number;
  out->param = e.param;
  if (e.lhs) out->lhs = clone_expr(*e.lhs);
  if (e.rhs) out->rhs = clone_expr(*e.rhs);
  return out;
}

CoeffFn compile_coeff_expr(const CoeffExpr& e, Index dim) {
  if (expr_max_param(e) >= dim)
    throw InputError("expression references a parameter beyond the declared dimension");
  auto shared = std::shared_ptr<const CoeffExpr>(clone_expr(e).release());
  CoeffFn f;
  f.eval = [shared](const RealVector& nu) { return eval_rec(*shared, nu); };
  f.grad = [shared, dim](const RealVector& nu) {
    RealVector g = RealVector::Zero(dim);
    grad_rec(*shared, nu, 1.0, g);
    return g;
  };
  return f;
}

}  // namespace qpsa
