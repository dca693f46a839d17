#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "opnorm/operator_lab.hpp"
#include "oracles.hpp"

using namespace opnorm;

namespace {

const QuadConfig kQ{};
const SpaceSpec kH2 = SpaceSpec::hardy(2.0);

SymbolFamily example(double c, bool with_blaschke = false) {
  return parse_symbol(with_blaschke ? "(c+t+z) * blaschke([0.5, 0.9]; 0)" : "(c+t+z)", {{"c", c}});
}

}  // namespace

TEST_CASE("operator norm equals the boundary sup") {
  CHECK(mult_operator_norm([](Complex) { return Complex(3.0); }, kH2, kQ) == doctest::Approx(3.0));
  CHECK(mult_operator_norm([](Complex z) { return (z + 2.0) / 3.0; }, SpaceSpec::bergman(2.0, 1.0), kQ) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const SymbolFamily f = example(-0.8, true);
  for (double t : {0.1, 0.5, 0.9}) {
    const double expected = std::abs(-0.8 + t) + 1.0;
    CHECK(mult_operator_norm(f.frozen(t), kH2, kQ) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(oracle::boundary_grid_max(f.frozen(t), 100000).value == doctest::Approx(expected).epsilon(1e-8));
  }
  CHECK_THROWS_AS(mult_operator_norm([](Complex z) { return z; }, SpaceSpec::hardy(-1.0), kQ), DomainError);
}

TEST_CASE("maximizing sequences") {
  const ApproxEvalMap one = maximizing_sequence([](Complex) { return Complex(1.0); }, kH2, 5, kQ);
  for (double m : one.moduli) CHECK(m == 1.0);

  const ApproxEvalMap zmap = maximizing_sequence([](Complex z) { return z; }, kH2, 10, kQ);
  for (int k = 1; k <= 10; ++k) CHECK(zmap.moduli[k - 1] == doctest::Approx(1.0 - std::ldexp(1.0, -k)).epsilon(1e-15));
  CHECK_FALSE(zmap.converged);

  const ApproxEvalMap g = maximizing_sequence([](Complex z) { return (z + 2.0) / 3.0; }, kH2, 12, kQ);
  CHECK(std::abs(g.xi - Complex(1.0)) < 1e-6);
  CHECK(g.moduli.back() >= 1.0 - 1e-3);
  for (std::size_t k = 1; k < g.points.size(); ++k) {
    CHECK(std::abs(g.points[k]) > std::abs(g.points[k - 1]));
    CHECK(std::abs(g.points[k] - g.xi) < std::abs(g.points[k - 1] - g.xi));
  }
  // The induced extremal functions have unit norm.
  for (std::size_t k = 0; k < g.points.size(); k += 3)
    CHECK(hardy_norm(extremal_function(g.points[k], kH2), 2.0, kQ) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(maximizing_sequence([](Complex z) { return z; }, kH2, 0, kQ), DomainError);
}

TEST_CASE("maximizing sequences reach the operator norm on random symbols") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sym = oracle::random_frozen_symbol(rng);
    const Evaluable g = [e = sym.eval](Complex z) { return e(0.5, z); };
    const ApproxEvalMap map = maximizing_sequence(g, kH2, 14, kQ);
    const double best = *std::max_element(map.moduli.begin(), map.moduli.end());
    CAPTURE(sym.text);
    CHECK(std::abs(best - mult_operator_norm(g, kH2, kQ)) < 1e-3);
  }
}

TEST_CASE("integrated symbol") {
  const Evaluable same = integrated_symbol(parse_symbol("z^2 + 1"), kQ);
  CHECK(same({0.3, 0.1}) == Complex(0.3, 0.1) * Complex(0.3, 0.1) + 1.0);
  const Evaluable g = integrated_symbol(example(0.3), kQ);
  for (Complex z : {Complex(0.2, 0.5), Complex(-1.0, 0.0)}) CHECK(std::abs(g(z) - (0.8 + z)) < 1e-12);
  const Evaluable e = integrated_symbol(parse_symbol("exp(i*pi*t)"), kQ);
  CHECK(std::abs(e(0.0) - Complex(0.0, 2.0 / oracle::kPi)) < 1e-12);
}

TEST_CASE("gap report on the worked example") {
  const GapReport pos = gap_report(example(0.3), kH2, kQ);
  CHECK(pos.lhs == doctest::Approx(1.8).epsilon(1e-10));
  CHECK(pos.rhs == doctest::Approx(1.8).epsilon(1e-10));
  CHECK(std::abs(pos.gap) < 1e-8);
  CHECK(pos.flags.empty());
  CHECK(std::is_sorted(pos.per_t.begin(), pos.per_t.end(), [](auto& a, auto& b) { return a.t < b.t; }));

  const GapReport mid = gap_report(example(-0.5), kH2, kQ);
  CHECK(std::abs(mid.rhs - 1.25) < 1e-8);
  CHECK(std::abs(mid.lhs - 1.0) < 1e-8);
  CHECK(std::abs(mid.gap - 0.25) < 1e-8);
  const auto grid = oracle::gap_grid([](double t, Complex z) { return -0.5 + t + z; }, 2000, 4096);
  CHECK(std::abs(grid.rhs - mid.rhs) < 1e-5);
  CHECK(std::abs(grid.lhs - mid.lhs) < 1e-5);

  const GapReport phase = gap_report(parse_symbol("exp(i*pi*t)"), kH2, kQ);
  CHECK(std::abs(phase.rhs - 1.0) < 1e-10);
  CHECK(std::abs(phase.lhs - 2.0 / oracle::kPi) < 1e-8);

  CHECK_THROWS_AS(gap_report(example(0.3), SpaceSpec::hardy(1.0), kQ), DomainError);
}

TEST_CASE("gap report flags") {
  const GapReport pole = gap_report(parse_symbol("t^(-1) * z"), kH2, kQ);
  CHECK(std::find(pole.flags.begin(), pole.flags.end(), "t_quadrature_nonconvergence") != pole.flags.end());
  const GapReport flat = gap_report(parse_symbol("t * z^2"), kH2, kQ);
  CHECK(std::find(flat.flags.begin(), flat.flags.end(), "per_t_plateau") != flat.flags.end());
  CHECK(std::abs(flat.gap) < 1e-10);
}

TEST_CASE("gap invariants: one-sided, phase, scaling, unimodular factor") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::kPi), scale(0.2, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = oracle::random_family(rng);
    const SymbolFamily f = parse_symbol(fam.text);
    const GapReport base = gap_report(f, kH2, kQ);
    CAPTURE(fam.text);
    CHECK(base.gap >= -1e-6);

    const Complex phase = std::polar(1.0, angle(rng));
    const GapReport rotated = gap_report(f.scaled(phase), kH2, kQ);
    CHECK(std::abs(rotated.lhs - base.lhs) < 1e-10);
    CHECK(std::abs(rotated.rhs - base.rhs) < 1e-10);
    CHECK(std::abs(rotated.gap - base.gap) < 1e-10);

    const double c = scale(rng);
    const GapReport scaled = gap_report(f.scaled(c), kH2, kQ);
    CHECK(scaled.lhs == doctest::Approx(c * base.lhs).epsilon(1e-10));
    CHECK(scaled.rhs == doctest::Approx(c * base.rhs).epsilon(1e-10));

    const GapReport blaschke = gap_report(f.times(make_blaschke(oracle::random_zeros(rng, 3), 1)), kH2, kQ);
    CHECK(std::abs(blaschke.lhs - base.lhs) < 1e-7);
    CHECK(std::abs(blaschke.rhs - base.rhs) < 1e-7);
  }
}
