#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "opnorm/quadrature.hpp"

namespace opnorm {

using Complex = std::complex<double>;

/// A function of one complex variable on the closed unit disk.
using Evaluable = std::function<Complex(Complex)>;

using Bindings = std::map<std::string, double>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation produced a pole (zero denominator) or a non-finite value.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain an operation is defined on.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Expression tree
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace node {

struct Const {
  Complex value;
};
struct VarZ {};
struct ParamT {};
struct Add {
  ExprPtr lhs, rhs;
};
struct Sub {
  ExprPtr lhs, rhs;
};
struct Mul {
  ExprPtr lhs, rhs;
};
struct Div {
  ExprPtr lhs, rhs;
};
struct Neg {
  ExprPtr operand;
};
struct IntPow {
  ExprPtr base;
  int exponent;
};
struct Exp {
  ExprPtr operand;
};
/// z^m * prod_k (conj(a_k)/|a_k|) (a_k - z) / (1 - conj(a_k) z), 0 < |a_k| < 1.
struct Blaschke {
  std::vector<Complex> zeros;
  int origin_order;
};

}  // namespace node

struct Expr {
  using Node = std::variant<node::Const, node::VarZ, node::ParamT, node::Add, node::Sub, node::Mul,
                            node::Div, node::Neg, node::IntPow, node::Exp, node::Blaschke>;
  Node node;
};

ExprPtr make_const(Complex value);
ExprPtr make_var_z();
ExprPtr make_param_t();
ExprPtr make_add(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_sub(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_mul(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_div(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_neg(ExprPtr operand);
ExprPtr make_int_pow(ExprPtr base, int exponent);
ExprPtr make_exp(ExprPtr operand);
/// Throws DomainError unless every zero lies in 0 < |a| < 1 and m >= 0.
ExprPtr make_blaschke(std::vector<Complex> zeros, int origin_order);

bool structurally_equal(const Expr& a, const Expr& b);

/// Canonical text form. Constants print as bracketed literals (`[-0.5]`,
/// `[0+1i]`) so that parsing the output rebuilds the identical tree.
std::string to_string(const Expr& e);

bool depends_on_t(const Expr& e);

/// Evaluates the tree literally. Throws EvalError on a zero denominator or a
/// non-finite result.
Complex evaluate(const Expr& e, double t, Complex z);

// ---------------------------------------------------------------------------
// Symbol families
// ---------------------------------------------------------------------------

/// The family {g_t : t in (0,1)} of analytic symbols. Immutable; evaluation is
/// reentrant.
class SymbolFamily {
 public:
  explicit SymbolFamily(ExprPtr body, Bindings bindings = {});

  const Expr& body() const noexcept { return *body_; }
  const ExprPtr& body_ptr() const noexcept { return body_; }
  const Bindings& bindings() const noexcept { return bindings_; }
  bool depends_on_t() const noexcept { return depends_on_t_; }

  /// g_t(z). Requires |z| <= 1 + 1e-12 and, when the body references t,
  /// 0 < t < 1.
  Complex eval(double t, Complex z) const;

  /// z -> g_t(z) for a fixed t.
  Evaluable frozen(double t) const;

  /// c * g_t
  SymbolFamily scaled(Complex c) const;
  /// g_t * h  (h may itself depend on t)
  SymbolFamily times(const ExprPtr& h) const;

  std::string to_string() const { return opnorm::to_string(*body_); }

 private:
  ExprPtr body_;
  Bindings bindings_;
  bool depends_on_t_;
};

/// Parses the symbol language. Names other than z, t, i, pi, exp and
/// blaschke are looked up in `bindings` and folded to constants.
SymbolFamily parse_symbol(std::string_view text, const Bindings& bindings = {});

ExprPtr parse_expr(std::string_view text, const Bindings& bindings = {});

Complex eval_symbol(const SymbolFamily& f, double t, Complex z);

/// sum_i w_i g_{t_i}(z). For a family that does not reference t this is the
/// plain value g(z).
Complex integrate_family_at(const SymbolFamily& f, Complex z, const QuadratureRule& t_rule);

/// True when every node is disk-algebra preserving and every denominator
/// (Div right operand, base of a negative IntPow) stays away from zero on a
/// grid over the closed disk and a set of t samples.
bool is_boundary_continuous(const SymbolFamily& f);

}  // namespace opnorm
