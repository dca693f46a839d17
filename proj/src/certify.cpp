#include "opnorm/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace opnorm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

std::vector<Arc> merge_arcs(std::vector<Arc> arcs) {
  for (Arc& a : arcs) a.start = wrap(a.start);
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  std::vector<Arc> out;
  for (const Arc& a : arcs) {
    if (!out.empty() && a.start <= out.back().start + out.back().width) {
      const double end = std::max(out.back().start + out.back().width, a.start + a.width);
      out.back().width = end - out.back().start;
    } else {
      out.push_back(a);
    }
  }
  if (out.size() > 1 && out.back().start + out.back().width >= out.front().start + kTwoPi) {
    const double end = std::max(out.back().start + out.back().width, out.front().start + out.front().width + kTwoPi);
    out.front().start = out.back().start;
    out.front().width = end - out.back().start;
    out.pop_back();
  }
  return out;
}

std::vector<Arc> intersect_arcs(const Arc& a, const Arc& b) {
  std::vector<Arc> out;
  const double as = wrap(a.start);
  const double bs = wrap(b.start);
  for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
    const double lo = std::max(as, bs + shift);
    const double hi = std::min(as + a.width, bs + shift + b.width);
    if (hi >= lo) out.push_back({lo, hi - lo});
  }
  return out;
}

// Per-t sup norms on the certification grid.
struct TGridSups {
  std::vector<double> ts;
  std::vector<double> sups;
};

TGridSups grid_sups(const SymbolFamily& f, const QuadConfig& q) {
  TGridSups g;
  g.ts = certification_t_grid(q);
  for (double t : g.ts) g.sups.push_back(sup_norm(f.frozen(t), q).value);
  return g;
}

Residuals residuals_on_grid(const SymbolFamily& f, Complex xi, const TGridSups& grid, const QuadConfig& q) {
  Residuals r;
  r.r2 = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.ts.size(); ++k)
    r.r2 = std::max(r.r2, grid.sups[k] - std::abs(f.eval(grid.ts[k], xi)));
  if (f.depends_on_t()) {
    const QuadratureRule rule = q.t_rule();
    double modulus_integral = 0.0;
    Complex integral(0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Complex v = f.eval(rule.nodes[i], xi);
      modulus_integral += rule.weights[i] * std::abs(v);
      integral += rule.weights[i] * v;
    }
    r.r1 = modulus_integral - std::abs(integral);
  }
  return r;
}

// Shell integrals of t -> ||g_t||_inf over [2^-(k+1), 2^-k] and the mirror
// shell near 1, k = 1..max_level-1, with an 8-point Gauss rule per shell.
std::vector<double> shell_integrals(const SymbolFamily& f, const QuadConfig& q, int max_level) {
  const QuadratureRule rule = gauss_legendre(8);
  auto integrate = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double t = a + (b - a) * rule.nodes[i];
      s += rule.weights[i] * sup_norm(f.frozen(t), q).value;
    }
    return s * (b - a);
  };
  std::vector<double> shells;
  for (int k = 1; k < max_level; ++k) {
    const double outer = std::ldexp(1.0, -k);
    const double inner = std::ldexp(1.0, -(k + 1));
    shells.push_back(integrate(inner, outer) + integrate(1.0 - outer, 1.0 - inner));
  }
  return shells;
}

WxVerdict combine(std::initializer_list<WxVerdict> vs) {
  bool all_pass = true;
  for (WxVerdict v : vs) {
    if (v == WxVerdict::FailWithWitness) return v;
    all_pass = all_pass && v == WxVerdict::PassEvidence;
  }
  return all_pass ? WxVerdict::PassEvidence : WxVerdict::Inconclusive;
}

}  // namespace

std::string to_string(WxVerdict v) {
  switch (v) {
    case WxVerdict::PassEvidence: return "PassEvidence";
    case WxVerdict::FailWithWitness: return "FailWithWitness";
    case WxVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::EqualityCertified: return "EqualityCertified";
    case CertVerdict::StrictInequalityEvidence: return "StrictInequalityEvidence";
    case CertVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> default_t_probe() {
  std::vector<double> probes;
  for (int k = 0; k < 16; ++k) probes.push_back((k + 0.5) / 16.0);
  return probes;
}

WxReport check_wx(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q,
                  const std::vector<double>& t_probe) {
  space.validate();
  q.validate();
  if (t_probe.size() < 8) throw DomainError("t_probe needs at least 8 points");
  for (double t : t_probe)
    if (!(t > 0.0 && t < 1.0)) throw DomainError("t_probe points must lie in (0,1)");

  WxReport report;
  const double floor = 100.0 * q.tol;

  // (1) continuity of t -> g_t in X
  std::vector<WxVerdict> c1;
  for (double t0 : t_probe) {
    WxContinuitySample sample;
    sample.t0 = t0;
    try {
      for (double delta : {1e-2, 1e-3, 1e-4}) {
        double worst = -1.0;
        for (double side : {-1.0, 1.0}) {
          const double t = t0 + side * delta;
          if (!(t > 0.0 && t < 1.0)) continue;
          auto diff = [&f, t, t0](Complex z) { return f.eval(t, z) - f.eval(t0, z); };
          worst = std::max(worst, space_norm(diff, space, q));
        }
        if (worst < 0.0) continue;
        sample.deltas.push_back(delta);
        sample.distances.push_back(worst);
      }
      if (sample.distances.size() < 2) {
        sample.verdict = WxVerdict::Inconclusive;
      } else {
        const double first = sample.distances.front();
        const double last = sample.distances.back();
        if (last <= std::max(floor, 0.5 * first)) {
          sample.verdict = WxVerdict::PassEvidence;
        } else {
          sample.verdict = WxVerdict::FailWithWitness;
          if (report.witness.empty())
            report.witness = "cond1: ||g_t - g_t0||_X does not decrease at t0 = " + std::to_string(t0);
        }
      }
    } catch (const std::exception& e) {
      sample.verdict = WxVerdict::Inconclusive;
      report.diagnostics.push_back("cond1 at t0 = " + std::to_string(t0) + ": " + e.what());
    }
    c1.push_back(sample.verdict);
    report.cond1.push_back(std::move(sample));
  }
  report.cond1_verdict = WxVerdict::PassEvidence;
  for (WxVerdict v : c1) report.cond1_verdict = combine({report.cond1_verdict, v});

  // (2) local boundedness on compacts [eps, 1 - eps]
  report.cond2_verdict = WxVerdict::PassEvidence;
  for (double eps : {0.1, 0.01}) {
    WxBoundSample sample;
    sample.epsilon = eps;
    constexpr int kSamples = 33;
    try {
      for (int k = 0; k < kSamples; ++k) {
        const double t = eps + (1.0 - 2.0 * eps) * k / (kSamples - 1);
        const double s = sup_norm(f.frozen(t), q).value;
        if (!std::isfinite(s)) throw EvalError("non-finite sup norm");
        if (s > sample.sup) {
          sample.sup = s;
          sample.argsup_t = t;
        }
      }
      sample.verdict = WxVerdict::PassEvidence;
    } catch (const std::exception& e) {
      sample.verdict = WxVerdict::FailWithWitness;
      if (report.witness.empty())
        report.witness = "cond2: ||g_t||_inf unbounded on [" + std::to_string(eps) + ", " +
                         std::to_string(1.0 - eps) + "]: " + e.what();
    }
    report.cond2_verdict = combine({report.cond2_verdict, sample.verdict});
    report.cond2.push_back(sample);
  }

  // (3) integrability of t -> ||g_t||_inf
  WxIntegrability& c3 = report.cond3;
  try {
    const std::vector<double> shells = shell_integrals(f, q, 32);
    c3.levels = {8, 16, 32};
    for (int level : c3.levels) {
      double s = 0.0;
      for (int k = 1; k < level; ++k) s += shells[k - 1];
      c3.estimates.push_back(s);
    }
    const double i8 = c3.estimates[0], i16 = c3.estimates[1], i32 = c3.estimates[2];
    const double d1 = i16 - i8, d2 = i32 - i16;
    c3.estimate = i32;
    c3.delta = d2;
    c3.relative_increase = i8 > 0.0 ? d1 / i8 : 0.0;
    if (!std::isfinite(i32)) {
      c3.verdict = WxVerdict::FailWithWitness;
    } else if (std::abs(d2) <= q.tol * std::max(1.0, std::abs(i32)) || d2 <= 0.5 * d1) {
      c3.verdict = WxVerdict::PassEvidence;
    } else if (c3.relative_increase > 0.5 && d2 >= 0.5 * d1) {
      c3.verdict = WxVerdict::FailWithWitness;
    } else {
      c3.verdict = WxVerdict::Inconclusive;
    }
    if (c3.verdict == WxVerdict::FailWithWitness && report.witness.empty())
      report.witness = "cond3: truncated integrals diverge (I_8 = " + std::to_string(i8) +
                       ", I_16 = " + std::to_string(i16) + ", I_32 = " + std::to_string(i32) + ")";
  } catch (const std::exception& e) {
    c3.verdict = WxVerdict::FailWithWitness;
    if (report.witness.empty()) report.witness = std::string("cond3: evaluation failed near an endpoint: ") + e.what();
  }

  report.verdict = combine({report.cond1_verdict, report.cond2_verdict, c3.verdict});
  return report;
}

std::vector<Complex> ArgmaxSet::points() const {
  std::vector<Complex> pts;
  for (const Arc& a : arcs) pts.push_back(std::polar(1.0, wrap(a.centre())));
  return pts;
}

ArgmaxSet argmax_set(const SymbolFamily& f, double t, const QuadConfig& q, double band) {
  if (!(band > 0.0)) throw DomainError("argmax band must be positive");
  const Evaluable g = f.frozen(t);
  // Same scan as sup_norm, so set.sup matches sup_norm(g).value exactly.
  // Grid candidates cover 5% of the maximum, which contains any band used here.
  const BoundaryScan scan = scan_boundary(g, q, q.tol, 0.05);
  const SupNormResult sup = summarize_scan(scan);
  ArgmaxSet set;
  set.sup = sup.value;
  if (sup.value < q.tol || (sup.plateau && sup.plateau_width >= kTwoPi)) {
    set.whole_circle = true;
    return set;
  }
  const double radius = kTwoPi / q.n_theta;
  std::vector<Arc> arcs;
  for (const BoundaryPeak& pk : scan.peaks)
    if (pk.value >= sup.value - band) arcs.push_back({pk.theta - radius, 2.0 * radius});
  if (sup.plateau) arcs.push_back({sup.plateau_start - radius, sup.plateau_width + 2.0 * radius});
  set.arcs = merge_arcs(std::move(arcs));
  return set;
}

ArgmaxSet intersect(const ArgmaxSet& a, const ArgmaxSet& b) {
  if (a.whole_circle) return b;
  if (b.whole_circle) return a;
  ArgmaxSet out;
  std::vector<Arc> arcs;
  for (const Arc& x : a.arcs)
    for (const Arc& y : b.arcs)
      for (const Arc& z : intersect_arcs(x, y)) arcs.push_back(z);
  out.arcs = merge_arcs(std::move(arcs));
  return out;
}

std::vector<double> certification_t_grid(const QuadConfig& q) {
  std::vector<double> ts = q.t_rule().nodes;
  for (double t : default_t_probe()) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

Residuals i1_i2_residuals(const SymbolFamily& f, const SpaceSpec& space, Complex xi, const QuadConfig& q) {
  space.validate();
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) throw DomainError("xi must lie on the unit circle");
  return residuals_on_grid(f, xi, grid_sups(f, q), q);
}

CertificateReport certify_equality(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q) {
  space.validate(true);
  q.validate();
  CertificateReport report;
  report.tol = q.tol;
  report.band = 100.0 * q.tol;
  if (!is_boundary_continuous(f)) {
    report.gap.space = space;
    report.gap.flags.push_back("not_boundary_continuous");
    report.gap_crosscheck = report.gap.lhs = report.gap.rhs = report.gap.gap = std::nan("");
    report.notes.push_back("symbol is not boundary-continuous; certification skipped");
    return report;
  }

  TGridSups grid;
  grid.ts = certification_t_grid(q);
  ArgmaxSet common;
  common.whole_circle = true;
  for (double t : grid.ts) {
    const ArgmaxSet s = argmax_set(f, t, q, report.band);
    grid.sups.push_back(s.sup);
    common = intersect(common, s);
  }

  std::vector<Complex> xis;
  if (common.whole_circle) {
    report.notes.push_back("argmax intersection is the whole circle; sampling 64 candidates");
    for (int k = 0; k < 64; ++k) xis.push_back(std::polar(1.0, kTwoPi * k / 64));
  } else {
    xis = common.points();
  }

  bool any_pass = false;
  for (Complex xi : xis) {
    Candidate c;
    c.xi = xi;
    const Residuals r = residuals_on_grid(f, xi, grid, q);
    c.i1_residual = r.r1;
    c.i2_residual = r.r2;
    for (double t : grid.ts) {
      const Complex v = f.eval(t, xi);
      if (std::abs(v) > q.tol) {
        c.theta = std::conj(v) / std::abs(v);
        break;
      }
    }
    for (double t : grid.ts) {
      const Complex v = f.eval(t, xi);
      c.phase_residual = std::max(c.phase_residual, std::abs(c.theta * v - std::abs(v)));
    }
    c.passes = c.i1_residual < q.tol && c.i2_residual < q.tol;
    any_pass = any_pass || c.passes;
    report.candidates.push_back(c);
  }
  if (xis.empty()) report.notes.push_back("argmax sets have empty intersection over the t-grid");

  report.gap = gap_report(f, space, q);
  report.gap_crosscheck = report.gap.gap;
  if (any_pass && std::abs(report.gap_crosscheck) < 10.0 * q.tol) {
    report.verdict = CertVerdict::EqualityCertified;
  } else if (!any_pass && report.gap_crosscheck > 100.0 * q.tol) {
    report.verdict = CertVerdict::StrictInequalityEvidence;
  } else {
    report.verdict = CertVerdict::Inconclusive;
    if (any_pass) report.notes.push_back("a candidate passes but the gap cross-check is not small");
    else report.notes.push_back("no candidate passes but the gap cross-check is small");
  }
  return report;
}

}  // namespace opnorm
