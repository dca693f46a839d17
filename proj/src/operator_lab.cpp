#include "opnorm/operator_lab.hpp"

#include <algorithm>
#include <cmath>

namespace opnorm {

double mult_operator_norm(const Evaluable& g, const SpaceSpec& space, const QuadConfig& q) {
  space.validate();
  return sup_norm(g, q).value;
}

ApproxEvalMap maximizing_sequence(const Evaluable& g, const SpaceSpec& space, int K, const QuadConfig& q) {
  if (K < 1) throw DomainError("maximizing sequence length K must be positive");
  space.validate();
  const SupNormResult sup = sup_norm(g, q);
  ApproxEvalMap map;
  map.xi = sup.maximizer;
  map.space = space;
  map.target = sup.value;
  for (int k = 1; k <= K; ++k) {
    const Complex z = (1.0 - std::ldexp(1.0, -k)) * map.xi;
    map.points.push_back(z);
    map.moduli.push_back(std::abs(g(z)));
  }
  map.converged = map.moduli.back() >= sup.value - 10.0 * q.tol;
  return map;
}

Evaluable integrated_symbol(const SymbolFamily& f, const QuadConfig& q) {
  return [f, rule = q.t_rule()](Complex z) { return integrate_family_at(f, z, rule); };
}

GapReport gap_report(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q) {
  space.validate(true);
  q.validate();
  GapReport report;
  report.space = space;

  const SupNormResult lhs = sup_norm(integrated_symbol(f, q), q);
  report.lhs = lhs.value;
  report.integrated_maximizer = lhs.maximizer;
  if (lhs.plateau) report.flags.push_back("lhs_plateau");

  bool any_plateau = false;
  auto integrand = [&](double t) {
    const SupNormResult s = sup_norm(f.frozen(t), q);
    any_plateau = any_plateau || s.plateau;
    report.per_t.push_back({t, s.value, s.maximizer});
    return s.value;
  };
  AdaptiveResult rhs;
  if (f.depends_on_t()) {
    // relative tolerance keeps the panel choice invariant under f -> c f
    rhs = integrate_adaptive(integrand, 0.0, 1.0, 0.0, 0.1 * q.tol, 4000);
  } else {
    rhs.value = integrand(0.5);
    rhs.converged = true;
  }
  report.rhs = rhs.value;
  report.rhs_error = rhs.error;
  if (!rhs.converged) report.flags.push_back("t_quadrature_nonconvergence");
  if (any_plateau) report.flags.push_back("per_t_plateau");
  std::sort(report.per_t.begin(), report.per_t.end(),
            [](const PerTSample& a, const PerTSample& b) { return a.t < b.t; });

  report.gap = report.rhs - report.lhs;
  if (report.gap < -(q.tol + report.rhs_error)) report.flags.push_back("inequality_violation");
  if (!is_boundary_continuous(f)) report.flags.push_back("not_boundary_continuous");
  return report;
}

}  // namespace opnorm
