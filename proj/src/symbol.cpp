#include "opnorm/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <type_traits>

namespace opnorm {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ExprPtr wrap(Expr::Node n) { return std::make_shared<const Expr>(Expr{std::move(n)}); }

void require_operand(const ExprPtr& e) {
  if (!e) throw std::invalid_argument("null expression operand");
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  std::string im = format_real(std::abs(c.imag())) + "i";
  if (c.real() == 0.0 && !std::signbit(c.real())) return (c.imag() < 0 ? "-" : "") + im;
  return format_real(c.real()) + (c.imag() < 0 ? "-" : "+") + im;
}

void print(const Expr& e, std::string& out) {
  std::visit(
      Overloaded{
          [&](const node::Const& n) { out += "[" + format_complex(n.value) + "]"; },
          [&](const node::VarZ&) { out += "z"; },
          [&](const node::ParamT&) { out += "t"; },
          [&](const node::Add& n) {
            out += "(";
            print(*n.lhs, out);
            out += " + ";
            print(*n.rhs, out);
            out += ")";
          },
          [&](const node::Sub& n) {
            out += "(";
            print(*n.lhs, out);
            out += " - ";
            print(*n.rhs, out);
            out += ")";
          },
          [&](const node::Mul& n) {
            out += "(";
            print(*n.lhs, out);
            out += " * ";
            print(*n.rhs, out);
            out += ")";
          },
          [&](const node::Div& n) {
            out += "(";
            print(*n.lhs, out);
            out += " / ";
            print(*n.rhs, out);
            out += ")";
          },
          [&](const node::Neg& n) {
            out += "(-";
            print(*n.operand, out);
            out += ")";
          },
          [&](const node::IntPow& n) {
            out += "(";
            print(*n.base, out);
            out += "^(" + std::to_string(n.exponent) + "))";
          },
          [&](const node::Exp& n) {
            out += "exp(";
            print(*n.operand, out);
            out += ")";
          },
          [&](const node::Blaschke& n) {
            out += "blaschke([";
            for (std::size_t k = 0; k < n.zeros.size(); ++k) {
              if (k) out += ", ";
              out += format_complex(n.zeros[k]);
            }
            out += "]; " + std::to_string(n.origin_order) + ")";
          },
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Complex checked(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvalError(std::string("non-finite value in ") + what);
  return v;
}

Complex ipow(Complex base, int n) {
  if (n < 0) {
    if (base == Complex(0.0)) throw EvalError("division by zero in negative power");
    return Complex(1.0) / ipow(base, -n);
  }
  Complex result(1.0);
  Complex b = base;
  unsigned e = static_cast<unsigned>(n);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

Complex blaschke_value(const node::Blaschke& b, Complex z) {
  Complex value = ipow(z, b.origin_order);
  for (Complex a : b.zeros) {
    const Complex ca = std::conj(a);
    const Complex den = 1.0 - ca * z;
    if (den == Complex(0.0)) throw EvalError("Blaschke factor pole");
    value *= (ca / std::abs(a)) * (a - z) / den;
  }
  return value;
}

Complex eval_node(const Expr& e, double t, Complex z) {
  return std::visit(
      Overloaded{
          [&](const node::Const& n) { return n.value; },
          [&](const node::VarZ&) { return z; },
          [&](const node::ParamT&) { return Complex(t); },
          [&](const node::Add& n) { return eval_node(*n.lhs, t, z) + eval_node(*n.rhs, t, z); },
          [&](const node::Sub& n) { return eval_node(*n.lhs, t, z) - eval_node(*n.rhs, t, z); },
          [&](const node::Mul& n) { return eval_node(*n.lhs, t, z) * eval_node(*n.rhs, t, z); },
          [&](const node::Div& n) {
            const Complex den = eval_node(*n.rhs, t, z);
            if (den == Complex(0.0)) throw EvalError("division by zero");
            return checked(eval_node(*n.lhs, t, z) / den, "division");
          },
          [&](const node::Neg& n) { return -eval_node(*n.operand, t, z); },
          [&](const node::IntPow& n) { return checked(ipow(eval_node(*n.base, t, z), n.exponent), "power"); },
          [&](const node::Exp& n) { return checked(std::exp(eval_node(*n.operand, t, z)), "exp"); },
          [&](const node::Blaschke& n) { return blaschke_value(n, z); },
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const Bindings& bindings) : text_(text), bindings_(bindings) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) ||
           (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  std::optional<std::string> identifier() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    const char c = text_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept_i() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Signed real or imaginary term: [+-] (number ['i'] | 'i')
  Complex complex_term(bool allow_leading_sign) {
    double sign = 1.0;
    if (allow_leading_sign) {
      if (accept('-')) sign = -1.0;
      else accept('+');
    }
    if (at_number()) {
      const double v = number();
      if (accept_i()) return {0.0, sign * v};
      return {sign * v, 0.0};
    }
    if (accept_i()) return {0.0, sign};
    fail("expected complex literal");
  }

  // a | a+bi | a-bi | bi  (leading sign allowed)
  Complex complex_literal() {
    Complex value = complex_term(true);
    if (value.imag() != 0.0 || !(peek('+') || peek('-'))) return value;
    const double sign = accept('-') ? -1.0 : (accept('+'), 1.0);
    if (at_number()) {
      const double v = number();
      if (!accept_i()) fail("imaginary part must end in 'i'");
      return {value.real(), sign * v};
    }
    if (accept_i()) return {value.real(), sign};
    fail("expected imaginary part");
  }

  int integer_exponent() {
    skip_ws();
    const bool paren = accept('(');
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    else accept('+');
    skip_ws();
    const std::size_t start = pos_;
    if (!at_number()) fail("expected integer exponent");
    const double v = number();
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      pos_ = start;
      fail("non-integer exponent");
    }
    if (paren) expect(')');
    return static_cast<int>(sign * v);
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_add(lhs, term());
      else if (accept('-')) lhs = make_sub(lhs, term());
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = make_mul(lhs, factor());
      else if (accept('/')) lhs = make_div(lhs, factor());
      else return lhs;
    }
  }

  // Unary minus binds looser than '^' so that -z^2 reads as -(z^2).
  ExprPtr factor() {
    if (accept('-')) return make_neg(factor());
    ExprPtr base = atom();
    if (accept('^')) return make_int_pow(base, integer_exponent());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (at_number()) return make_const(number());
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (accept('[')) {
      Complex c = complex_literal();
      expect(']');
      return make_const(c);
    }
    const std::size_t start = pos_;
    auto name = identifier();
    if (!name) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (*name == "z") return make_var_z();
    if (*name == "t") return make_param_t();
    if (*name == "i") return make_const(Complex(0.0, 1.0));
    if (*name == "pi") return make_const(std::numbers::pi);
    if (*name == "exp") {
      expect('(');
      ExprPtr e = expr();
      expect(')');
      return make_exp(e);
    }
    if (*name == "blaschke") return blaschke();
    auto it = bindings_.find(*name);
    if (it == bindings_.end()) {
      pos_ = start;
      fail("unbound name '" + *name + "'");
    }
    return make_const(it->second);
  }

  ExprPtr blaschke() {
    expect('(');
    expect('[');
    std::vector<Complex> zeros;
    if (!peek(']')) {
      do {
        const std::size_t at = pos_;
        Complex a = complex_literal();
        if (!(std::abs(a) > 0.0 && std::abs(a) < 1.0)) {
          pos_ = at;
          fail(std::abs(a) == 0.0 ? "Blaschke zero at the origin (use the exponent m)"
                                  : "Blaschke zero outside the open unit disk");
        }
        zeros.push_back(a);
      } while (accept(','));
    }
    expect(']');
    expect(';');
    skip_ws();
    const std::size_t at = pos_;
    if (!at_number()) fail("expected nonnegative integer origin order");
    const double m = number();
    if (m != std::floor(m) || m > 1e6) {
      pos_ = at;
      fail("origin order must be a nonnegative integer");
    }
    expect(')');
    return make_blaschke(std::move(zeros), static_cast<int>(m));
  }

  std::string_view text_;
  const Bindings& bindings_;
  std::size_t pos_ = 0;
};

bool is_reserved(const std::string& name) {
  return name == "z" || name == "t" || name == "i" || name == "pi" || name == "exp" || name == "blaschke";
}

// Denominator subexpressions: right operands of Div and bases of negative powers.
void collect_denominators(const Expr& e, std::vector<const Expr*>& out, bool& algebra_nodes_only) {
  std::visit(Overloaded{
                 [&](const node::Const&) {},
                 [&](const node::VarZ&) {},
                 [&](const node::ParamT&) {},
                 [&](const node::Add& n) {
                   collect_denominators(*n.lhs, out, algebra_nodes_only);
                   collect_denominators(*n.rhs, out, algebra_nodes_only);
                 },
                 [&](const node::Sub& n) {
                   collect_denominators(*n.lhs, out, algebra_nodes_only);
                   collect_denominators(*n.rhs, out, algebra_nodes_only);
                 },
                 [&](const node::Mul& n) {
                   collect_denominators(*n.lhs, out, algebra_nodes_only);
                   collect_denominators(*n.rhs, out, algebra_nodes_only);
                 },
                 [&](const node::Div& n) {
                   collect_denominators(*n.lhs, out, algebra_nodes_only);
                   collect_denominators(*n.rhs, out, algebra_nodes_only);
                   out.push_back(n.rhs.get());
                 },
                 [&](const node::Neg& n) { collect_denominators(*n.operand, out, algebra_nodes_only); },
                 [&](const node::IntPow& n) {
                   collect_denominators(*n.base, out, algebra_nodes_only);
                   if (n.exponent < 0) out.push_back(n.base.get());
                 },
                 [&](const node::Exp& n) { collect_denominators(*n.operand, out, algebra_nodes_only); },
                 [&](const node::Blaschke& n) {
                   for (Complex a : n.zeros)
                     if (!(std::abs(a) > 0.0 && std::abs(a) < 1.0)) algebra_nodes_only = false;
                 },
             },
             e.node);
}

// Minimum of |h(e^{i theta})| by grid search plus golden-section polishing of
// the smallest grid minima.
double boundary_min_modulus(const Expr& h, double t) {
  constexpr int kGrid = 1024;
  const double step = 2.0 * std::numbers::pi / kGrid;
  auto mod = [&](double theta) { return std::abs(eval_node(h, t, std::polar(1.0, theta))); };
  std::vector<double> values(kGrid);
  for (int j = 0; j < kGrid; ++j) values[j] = mod(step * j);
  std::vector<int> minima;
  for (int j = 0; j < kGrid; ++j) {
    const double prev = values[(j + kGrid - 1) % kGrid];
    const double next = values[(j + 1) % kGrid];
    if (values[j] <= prev && values[j] <= next) minima.push_back(j);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return values[a] < values[b]; });
  if (minima.size() > 8) minima.resize(8);
  double best = *std::min_element(values.begin(), values.end());
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j : minima) {
    double lo = step * (j - 1), hi = step * (j + 1);
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = mod(x1), f2 = mod(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = mod(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = mod(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

ExprPtr make_const(Complex value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("constant must be finite");
  return wrap(node::Const{value});
}
ExprPtr make_var_z() { return wrap(node::VarZ{}); }
ExprPtr make_param_t() { return wrap(node::ParamT{}); }
ExprPtr make_add(ExprPtr lhs, ExprPtr rhs) {
  require_operand(lhs);
  require_operand(rhs);
  return wrap(node::Add{std::move(lhs), std::move(rhs)});
}
ExprPtr make_sub(ExprPtr lhs, ExprPtr rhs) {
  require_operand(lhs);
  require_operand(rhs);
  return wrap(node::Sub{std::move(lhs), std::move(rhs)});
}
ExprPtr make_mul(ExprPtr lhs, ExprPtr rhs) {
  require_operand(lhs);
  require_operand(rhs);
  return wrap(node::Mul{std::move(lhs), std::move(rhs)});
}
ExprPtr make_div(ExprPtr lhs, ExprPtr rhs) {
  require_operand(lhs);
  require_operand(rhs);
  return wrap(node::Div{std::move(lhs), std::move(rhs)});
}
ExprPtr make_neg(ExprPtr operand) {
  require_operand(operand);
  return wrap(node::Neg{std::move(operand)});
}
ExprPtr make_int_pow(ExprPtr base, int exponent) {
  require_operand(base);
  return wrap(node::IntPow{std::move(base), exponent});
}
ExprPtr make_exp(ExprPtr operand) {
  require_operand(operand);
  return wrap(node::Exp{std::move(operand)});
}
ExprPtr make_blaschke(std::vector<Complex> zeros, int origin_order) {
  if (origin_order < 0) throw DomainError("Blaschke origin order must be nonnegative");
  for (Complex a : zeros) {
    if (!(std::abs(a) > 0.0 && std::abs(a) < 1.0))
      throw DomainError("Blaschke zero " + format_complex(a) + " must satisfy 0 < |a| < 1");
  }
  return wrap(node::Blaschke{std::move(zeros), origin_order});
}

// ---------------------------------------------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, node::Const>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, node::VarZ> || std::is_same_v<T, node::ParamT>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Neg> || std::is_same_v<T, node::Exp>) {
          return structurally_equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, node::IntPow>) {
          return na.exponent == nb.exponent && structurally_equal(*na.base, *nb.base);
        } else if constexpr (std::is_same_v<T, node::Blaschke>) {
          return na.origin_order == nb.origin_order && na.zeros == nb.zeros;
        } else {
          return structurally_equal(*na.lhs, *nb.lhs) && structurally_equal(*na.rhs, *nb.rhs);
        }
      },
      a.node);
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool depends_on_t(const Expr& e) {
  return std::visit(Overloaded{
                        [](const node::Const&) { return false; },
                        [](const node::VarZ&) { return false; },
                        [](const node::ParamT&) { return true; },
                        [](const node::Add& n) { return depends_on_t(*n.lhs) || depends_on_t(*n.rhs); },
                        [](const node::Sub& n) { return depends_on_t(*n.lhs) || depends_on_t(*n.rhs); },
                        [](const node::Mul& n) { return depends_on_t(*n.lhs) || depends_on_t(*n.rhs); },
                        [](const node::Div& n) { return depends_on_t(*n.lhs) || depends_on_t(*n.rhs); },
                        [](const node::Neg& n) { return depends_on_t(*n.operand); },
                        [](const node::IntPow& n) { return depends_on_t(*n.base); },
                        [](const node::Exp& n) { return depends_on_t(*n.operand); },
                        [](const node::Blaschke&) { return false; },
                    },
                    e.node);
}

Complex evaluate(const Expr& e, double t, Complex z) { return checked(eval_node(e, t, z), "symbol"); }

// ---------------------------------------------------------------------------

SymbolFamily::SymbolFamily(ExprPtr body, Bindings bindings)
    : body_(std::move(body)), bindings_(std::move(bindings)) {
  require_operand(body_);
  depends_on_t_ = opnorm::depends_on_t(*body_);
}

Complex SymbolFamily::eval(double t, Complex z) const {
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw DomainError("evaluation point outside the closed unit disk");
  if (depends_on_t_ && !(t > 0.0 && t < 1.0)) throw DomainError("parameter t must lie in (0,1)");
  return evaluate(*body_, t, z);
}

Evaluable SymbolFamily::frozen(double t) const {
  return [self = *this, t](Complex z) { return self.eval(t, z); };
}

SymbolFamily SymbolFamily::scaled(Complex c) const {
  return SymbolFamily(make_mul(make_const(c), body_), bindings_);
}

SymbolFamily SymbolFamily::times(const ExprPtr& h) const {
  return SymbolFamily(make_mul(body_, h), bindings_);
}

ExprPtr parse_expr(std::string_view text, const Bindings& bindings) {
  for (const auto& [name, value] : bindings) {
    if (is_reserved(name)) throw DomainError("binding name '" + name + "' is reserved");
    if (!std::isfinite(value)) throw DomainError("binding '" + name + "' is not finite");
  }
  return Parser(text, bindings).parse();
}

SymbolFamily parse_symbol(std::string_view text, const Bindings& bindings) {
  return SymbolFamily(parse_expr(text, bindings), bindings);
}

Complex eval_symbol(const SymbolFamily& f, double t, Complex z) { return f.eval(t, z); }

Complex integrate_family_at(const SymbolFamily& f, Complex z, const QuadratureRule& t_rule) {
  if (t_rule.size() < 2) throw DomainError("t-quadrature rule needs at least two nodes");
  if (!f.depends_on_t()) return f.eval(0.5, z);
  Complex sum(0.0);
  for (std::size_t i = 0; i < t_rule.size(); ++i) sum += t_rule.weights[i] * f.eval(t_rule.nodes[i], z);
  return sum;
}

bool is_boundary_continuous(const SymbolFamily& f) {
  std::vector<const Expr*> denominators;
  bool algebra_nodes_only = true;
  collect_denominators(f.body(), denominators, algebra_nodes_only);
  if (!algebra_nodes_only) return false;
  if (denominators.empty()) return true;

  constexpr double kMinModulus = 1e-6;
  const std::vector<double> t_samples =
      f.depends_on_t() ? std::vector<double>{1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}
                       : std::vector<double>{0.5};
  const std::vector<double> radii = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99};
  try {
    for (const Expr* den : denominators) {
      for (double t : t_samples) {
        if (boundary_min_modulus(*den, t) <= kMinModulus) return false;
        for (double r : radii) {
          for (int j = 0; j < 64; ++j) {
            const Complex z = std::polar(r, 2.0 * std::numbers::pi * j / 64);
            if (std::abs(eval_node(*den, t, z)) <= kMinModulus) return false;
          }
        }
      }
    }
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

}  // namespace opnorm
