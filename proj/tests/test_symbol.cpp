#include <doctest.h>

#include <cmath>
#include <random>

#include "opnorm/quadrature.hpp"
#include "opnorm/symbol.hpp"
#include "oracles.hpp"

using namespace opnorm;

namespace {

ExprPtr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> leaf(0, 2), inner(0, 9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  if (depth == 0) {
    switch (leaf(rng)) {
      case 0: return make_const({u(rng), u(rng)});
      case 1: return make_var_z();
      default: return make_param_t();
    }
  }
  switch (inner(rng)) {
    case 0: return make_add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 1: return make_sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 2: return make_mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 3: return make_div(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return make_neg(random_tree(rng, depth - 1));
    case 5: return make_int_pow(random_tree(rng, depth - 1), std::uniform_int_distribution<int>(-3, 4)(rng));
    case 6: return make_exp(random_tree(rng, depth - 1));
    case 7: return make_blaschke(oracle::random_zeros(rng, 2), std::uniform_int_distribution<int>(0, 2)(rng));
    default: return make_const({u(rng), 0.0});
  }
}

}  // namespace

TEST_CASE("parse: bound constants fold into the tree") {
  const SymbolFamily f = parse_symbol("(c + t + z) * blaschke([0.5, 0.9]; 0)", {{"c", -0.5}});
  const ExprPtr expected =
      make_mul(make_add(make_add(make_const(-0.5), make_param_t()), make_var_z()), make_blaschke({0.5, 0.9}, 0));
  CHECK(structurally_equal(f.body(), *expected));
  CHECK(f.depends_on_t());
}

TEST_CASE("parse: single variable and literals") {
  CHECK(structurally_equal(parse_symbol("z").body(), *make_var_z()));
  CHECK_FALSE(parse_symbol("z").depends_on_t());
  CHECK(structurally_equal(parse_symbol("2*i").body(), *make_mul(make_const(2.0), make_const({0.0, 1.0}))));
  CHECK(structurally_equal(parse_symbol("[1.5-0.25i]").body(), *make_const({1.5, -0.25})));
  CHECK(structurally_equal(parse_symbol("-z^2").body(), *make_neg(make_int_pow(make_var_z(), 2))));
  CHECK(structurally_equal(parse_symbol("z^(-1)").body(), *make_int_pow(make_var_z(), -1)));
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse_symbol("blaschke([1.2]; 0)"), ParseError);
  CHECK_THROWS_AS(make_blaschke({1.2}, 0), DomainError);
  CHECK_THROWS_AS(parse_symbol("blaschke([0]; 0)"), ParseError);
  CHECK_THROWS_AS(parse_symbol("c + z"), ParseError);
  CHECK_THROWS_AS(parse_symbol("z^1.5"), ParseError);
  CHECK_THROWS_AS(parse_symbol("z + * 2"), ParseError);
  CHECK_THROWS_AS(parse_symbol("(z + 1"), ParseError);
  try {
    parse_symbol("z + )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("eval: Blaschke zero, boundary modulus and arithmetic") {
  const SymbolFamily b = parse_symbol("blaschke([0.5]; 0)");
  CHECK(std::abs(eval_symbol(b, 0.3, 0.5)) == doctest::Approx(0.0));
  for (double theta : {0.0, 1.0, 2.0}) CHECK(std::abs(std::abs(eval_symbol(b, 0.3, std::polar(1.0, theta))) - 1.0) < 1e-12);
  const SymbolFamily f = parse_symbol("(c+t+z)", {{"c", 0.0}});
  CHECK(std::abs(eval_symbol(f, 0.25, 1.0) - Complex(1.25)) < 1e-15);
}

TEST_CASE("eval: domain and pole errors") {
  const SymbolFamily f = parse_symbol("t + z");
  CHECK_THROWS_AS(f.eval(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(f.eval(0.5, 1.1), DomainError);
  CHECK_THROWS_AS(parse_symbol("1/(1-z)").eval(0.5, 1.0), EvalError);
}

TEST_CASE("Blaschke product matches its definition and is unimodular on the circle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::kPi), radius(0.0, 0.999);
  std::uniform_int_distribution<int> count(1, 5), order(0, 3);
  double worst_boundary = 0.0, worst_inside = 0.0, worst_match = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto zeros = oracle::random_zeros(rng, count(rng));
    const int m = order(rng);
    const ExprPtr b = make_blaschke(zeros, m);
    for (int k = 0; k < 100; ++k) {
      const Complex on = std::polar(1.0, angle(rng));
      worst_boundary = std::max(worst_boundary, std::abs(std::abs(evaluate(*b, 0.5, on)) - 1.0));
      const Complex in = std::polar(radius(rng), angle(rng));
      worst_inside = std::max(worst_inside, std::abs(evaluate(*b, 0.5, in)) - 1.0);
      worst_match = std::max(worst_match, std::abs(evaluate(*b, 0.5, in) - oracle::blaschke(zeros, m, in)));
    }
  }
  CHECK(worst_boundary < 1e-10);
  CHECK(worst_inside <= 1e-12);
  CHECK(worst_match < 1e-13);
}

TEST_CASE("print then parse is the identity on trees") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const ExprPtr e = random_tree(rng, 1 + trial % 4);
    const std::string text = to_string(*e);
    CAPTURE(text);
    const ExprPtr back = parse_expr(text);
    CHECK(structurally_equal(*e, *back));
    CHECK(to_string(*back) == text);
  }
}

TEST_CASE("integrate_family_at") {
  const QuadratureRule g32 = gauss_legendre(32);
  const Complex oracle_value =
      oracle::midpoint([](double t) { return std::exp(Complex(0.0, oracle::kPi * t)); }, 0.0, 1.0, 1000000);
  CHECK(std::abs(oracle_value - Complex(0.0, 2.0 / oracle::kPi)) < 1e-10);
  const Complex v = integrate_family_at(parse_symbol("exp(i*pi*t)"), 0.3, g32);
  CHECK(std::abs(v - oracle_value) < 1e-10);

  CHECK(std::abs(integrate_family_at(parse_symbol("(c+t+z)", {{"c", 0.0}}), 1.0, g32) - Complex(1.5)) < 1e-14);
  const Complex z{0.3, 0.4};
  CHECK(integrate_family_at(parse_symbol("z"), z, g32) == z);
  CHECK_THROWS_AS(integrate_family_at(parse_symbol("t"), z, gauss_legendre(1)), DomainError);
}

TEST_CASE("integrate_family_at is linear in the family") {
  std::mt19937_64 rng(17);
  const QuadratureRule rule = gauss_legendre(24);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f1 = oracle::random_family(rng);
    const auto f2 = oracle::random_family(rng);
    const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const std::string combo =
        oracle::literal(a) + " * (" + f1.text + ") + " + oracle::literal(b) + " * (" + f2.text + ")";
    const Complex z = std::polar(0.9, u(rng));
    const Complex lhs = integrate_family_at(parse_symbol(combo), z, rule);
    const Complex rhs = a * integrate_family_at(parse_symbol(f1.text), z, rule) +
                        b * integrate_family_at(parse_symbol(f2.text), z, rule);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("random family text agrees with its independent evaluator") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fam = oracle::random_family(rng);
    const auto sym = oracle::random_frozen_symbol(rng);
    const SymbolFamily f = parse_symbol(fam.text), g = parse_symbol(sym.text);
    const Complex z = std::polar(0.97, 0.37 * trial);
    CHECK(std::abs(f.eval(0.3, z) - fam.eval(0.3, z)) < 1e-12);
    CHECK(std::abs(g.eval(0.5, z) - sym.eval(0.5, z)) < 1e-12);
  }
}

TEST_CASE("is_boundary_continuous") {
  CHECK(is_boundary_continuous(parse_symbol("(c+t+z)*blaschke([0.5,0.9];0)", {{"c", -0.5}})));
  CHECK_FALSE(is_boundary_continuous(parse_symbol("1/(1-z)")));
  CHECK(is_boundary_continuous(parse_symbol("exp(z)")));
  CHECK(is_boundary_continuous(parse_symbol("1/(2-z)")));
  CHECK_FALSE(is_boundary_continuous(parse_symbol("z^(-1)")));
  CHECK_FALSE(is_boundary_continuous(parse_symbol("1/(t - 0.5 + z)")));
}
