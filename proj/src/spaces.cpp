#include "opnorm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

namespace opnorm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kThetaStart = 64;
constexpr int kThetaMax = 1 << 21;
constexpr double kThetaRelTol = 1e-11;
constexpr int kRadialMax = 4096;
constexpr double kRadialRelTol = 1e-10;
constexpr double kSupBandRel = 0.05;
constexpr int kPeakRings = 30;
constexpr double kRecenterRadius = 0.9;

double pth_power_mean(const Evaluable& f, double p, double r) {
  auto integrand = [&](double theta) { return std::pow(std::abs(f(std::polar(r, theta))), p); };
  return adaptive_periodic_mean(integrand, kThetaStart, kThetaRelTol, kThetaMax).value;
}

// Neville extrapolation of the points (x_k, y_k) to x = 0.
double extrapolate_to_zero(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    }
  }
  return y[0];
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi, int iters,
                       double width_tol, double& best_x, double& bracket) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters && hi - lo > width_tol; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  bracket = hi - lo;
  if (f1 > f2) {
    best_x = x1;
    return f1;
  }
  best_x = x2;
  return f2;
}

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

}  // namespace

void SpaceSpec::validate(bool for_certification) const {
  if (!std::isfinite(p) || !(p > 0.0)) throw DomainError("space.p must be a positive real");
  if (for_certification && !(p > 1.0)) throw DomainError("space.p must exceed 1 for certification");
  if (kind == SpaceKind::Bergman && !(std::isfinite(alpha) && alpha > -1.0))
    throw DomainError("space.alpha must exceed -1");
}

double SpaceSpec::evaluation_exponent() const {
  return kind == SpaceKind::Hardy ? 1.0 / p : (2.0 + alpha) / p;
}

std::string SpaceSpec::name() const { return kind == SpaceKind::Hardy ? "hardy" : "bergman"; }

void QuadConfig::validate() const {
  if (n_theta < 16) throw DomainError("quad.n_theta must be at least 16");
  if (n_radial < 8) throw DomainError("quad.n_radial must be at least 8");
  if (hardy_radii.empty()) throw DomainError("quad.hardy_radii must be nonempty");
  for (std::size_t k = 0; k < hardy_radii.size(); ++k) {
    const double r = hardy_radii[k];
    if (!(r > 0.0 && r < 1.0)) throw DomainError("quad.hardy_radii entries must lie in (0,1)");
    if (k > 0 && !(r > hardy_radii[k - 1])) throw DomainError("quad.hardy_radii must be strictly increasing");
  }
  if (n_t < 2) throw DomainError("quad.n_t must be at least 2");
  if (sup_refine_iters < 1) throw DomainError("quad.sup_refine_iters must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("quad.tol must be a positive real");
}

double circle_mean(const Evaluable& f, double p, double r, const QuadConfig&) {
  return std::pow(pth_power_mean(f, p, r), 1.0 / p);
}

double hardy_norm(const Evaluable& f, double p, const QuadConfig& q) {
  if (!(p > 0.0)) throw DomainError("Hardy exponent p must be positive");
  std::vector<double> means;
  means.reserve(q.hardy_radii.size());
  for (double r : q.hardy_radii) means.push_back(circle_mean(f, p, r, q));

  auto slack = [&](double m) { return 1e-10 * m + 1e-14; };
  for (std::size_t k = 1; k < means.size(); ++k) {
    if (means[k] < means[k - 1] - slack(means[k - 1]))
      throw QuadratureError("circle means decrease between r = " + std::to_string(q.hardy_radii[k - 1]) +
                            " and r = " + std::to_string(q.hardy_radii[k]));
  }

  double boundary = 0.0;
  try {
    boundary = circle_mean(f, p, 1.0, q);
  } catch (const EvalError&) {
    std::vector<double> h, mp;
    const std::size_t first = means.size() > 4 ? means.size() - 4 : 0;
    for (std::size_t k = first; k < means.size(); ++k) {
      h.push_back(1.0 - q.hardy_radii[k]);
      mp.push_back(std::pow(means[k], p));
    }
    const double limit = extrapolate_to_zero(h, mp);
    return std::max(means.back(), std::pow(std::max(limit, 0.0), 1.0 / p));
  }
  if (boundary < means.back() - slack(means.back()))
    throw QuadratureError("boundary mean falls below the interior circle means");
  return boundary;
}

// Point of largest hyperbolic mass density |f(z)|^p (1-|z|^2)^(2+alpha),
// searched ring by ring on r_j = 1 - 2^-j with angles refined around the
// running best. Only a hint: any point of the disk gives the same norm.
Complex mass_peak(const Evaluable& f, double p, double alpha) {
  Complex best = 0.0;
  double best_density = -1.0;
  double best_theta = 0.0;
  try {
    for (int j = 1; j <= kPeakRings; ++j) {
      const double r = 1.0 - std::ldexp(1.0, -j);
      const double weight = std::pow(1.0 - r * r, (2.0 + alpha) / p);
      const double spread = std::ldexp(1.0, -j);
      double ring_theta = best_theta;
      auto visit = [&](double theta) {
        const Complex z = std::polar(r, theta);
        const double d = std::abs(f(z)) * weight;
        if (d > best_density) {
          best_density = d;
          best = z;
          ring_theta = theta;
        }
      };
      for (int k = 0; k < 32; ++k) visit(kTwoPi * k / 32);
      for (int k = -8; k <= 8; ++k) visit(best_theta + 0.5 * spread * k);
      best_theta = ring_theta;
    }
  } catch (const EvalError&) {
  }
  return best;
}

double bergman_norm(const Evaluable& f, double p, double alpha, const QuadConfig& q) {
  if (!(p > 0.0)) throw DomainError("Bergman exponent p must be positive");
  if (!(alpha > -1.0)) throw DomainError("Bergman weight alpha must exceed -1");
  // A mass peak near the boundary is moved to the origin by the automorphism
  // phi_a(w) = (a - w) / (1 - conj(a) w); dA_alpha(phi_a(w)) = |phi_a'(w)|^(2+alpha) dA_alpha(w).
  const Complex a = mass_peak(f, p, alpha);
  Evaluable g = f;
  if (std::abs(a) >= kRecenterRadius) {
    const double shrink = 1.0 - std::norm(a);
    const double e = (2.0 + alpha) / p;
    g = [&f, a, shrink, e](Complex w) {
      const Complex d = 1.0 - std::conj(a) * w;
      return f((a - w) / d) * std::pow(shrink / std::norm(d), e);
    };
  }
  auto level = [&](int n) {
    const QuadratureRule& rule = gauss_jacobi(n, alpha);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      sum += rule.weights[i] * pth_power_mean(g, p, std::sqrt(rule.nodes[i]));
    return sum;
  };
  int n = q.n_radial;
  double coarse = level(n);
  double fine = coarse;
  while (n < kRadialMax) {
    n *= 2;
    fine = level(n);
    if (std::abs(fine - coarse) <= kRadialRelTol * std::abs(fine)) break;
    coarse = fine;
  }
  return std::pow(fine, 1.0 / p);
}

double space_norm(const Evaluable& f, const SpaceSpec& space, const QuadConfig& q) {
  return space.kind == SpaceKind::Hardy ? hardy_norm(f, space.p, q)
                                        : bergman_norm(f, space.p, space.alpha, q);
}

// Moves a golden-section maximizer onto the zero of the derivative of |g|^2
// (five-point stencil, step kStencil). Golden section alone only pins a smooth
// maximum to about sqrt(eps); the derivative has a simple zero there.
constexpr double kStencil = 1e-3;

bool polish_peak(const std::function<double(double)>& modulus, double step, double& x, double& bracket) {
  auto sq = [&](double th) {
    const double m = modulus(th);
    return m * m;
  };
  auto slope = [&](double th) {
    const double h = kStencil;
    return (-sq(th + 2 * h) + 8 * sq(th + h) - 8 * sq(th - h) + sq(th - 2 * h)) / (12 * h);
  };
  try {
    for (double w = 1e-6; w <= step; w *= 4.0) {
      const double lo = x - w, hi = x + w;
      const double flo = slope(lo), fhi = slope(hi);
      if (!(flo > 0.0 && fhi < 0.0)) continue;
      std::uintmax_t iters = 100;
      const auto root = boost::math::tools::toms748_solve(slope, lo, hi, flo, fhi,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
      x = 0.5 * (root.first + root.second);
      bracket = root.second - root.first;
      return true;
    }
  } catch (const EvalError&) {
  }
  return false;
}

BoundaryScan scan_boundary(const Evaluable& g, const QuadConfig& q, double band_abs, double band_rel) {
  const int n = q.n_theta;
  const double step = kTwoPi / n;
  auto modulus = [&](double theta) { return std::abs(g(std::polar(1.0, theta))); };

  std::vector<double> values(n);
  for (int j = 0; j < n; ++j) values[j] = modulus(step * j);

  BoundaryScan scan;
  scan.grid_max = *std::max_element(values.begin(), values.end());

  // Plateau: a run of at least three consecutive nodes at the grid maximum.
  const double flat_tol = 1e-12 * std::max(1.0, scan.grid_max);
  std::vector<char> near(n);
  int near_count = 0;
  for (int j = 0; j < n; ++j) {
    near[j] = values[j] >= scan.grid_max - flat_tol;
    near_count += near[j];
  }
  if (near_count == n) {
    scan.plateau = true;
    scan.plateau_start = 0.0;
    scan.plateau_width = kTwoPi;
  } else {
    int start = 0;
    while (near[start]) ++start;  // begin scanning just after a gap
    int best_len = 0, best_first = 0, run = 0, run_first = 0;
    for (int k = 1; k <= n; ++k) {
      const int j = (start + k) % n;
      if (near[j]) {
        if (run == 0) run_first = j;
        ++run;
        if (run > best_len) {
          best_len = run;
          best_first = run_first;
        }
      } else {
        run = 0;
      }
    }
    if (best_len >= 3) {
      scan.plateau = true;
      scan.plateau_start = step * best_first;
      scan.plateau_width = step * (best_len - 1);
    }
  }

  const double band = std::max(band_abs, band_rel * scan.grid_max);
  std::vector<int> candidates;
  for (int j = 0; j < n; ++j) {
    const double prev = values[(j + n - 1) % n];
    const double next = values[(j + 1) % n];
    if (values[j] >= prev && values[j] >= next && values[j] >= scan.grid_max - band) candidates.push_back(j);
  }
  if (scan.plateau && scan.plateau_width >= kTwoPi) candidates.clear();
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) { return values[a] > values[b]; });
  if (candidates.size() > 64) candidates.resize(64);

  for (int j : candidates) {
    double x = 0.0, bracket = 0.0;
    double v = golden_maximize(modulus, step * (j - 1), step * (j + 1), q.sup_refine_iters, q.tol, x, bracket);
    if (values[j] > v) {
      v = values[j];
      x = step * j;
    }
    double xp = x, bp = bracket;
    if (polish_peak(modulus, step, xp, bp)) {
      const double vp = modulus(xp);
      if (vp >= v - 1e-14 * std::max(1.0, v)) {
        x = xp;
        v = vp;
        bracket = bp;
      }
    }
    scan.peaks.push_back({wrap_angle(x), v, bracket});
  }
  std::sort(scan.peaks.begin(), scan.peaks.end(),
            [](const BoundaryPeak& a, const BoundaryPeak& b) { return a.theta < b.theta; });

  // Merge peaks closer than one grid cell, keeping the larger value.
  std::vector<BoundaryPeak> merged;
  for (const BoundaryPeak& pk : scan.peaks) {
    if (!merged.empty() && pk.theta - merged.back().theta < step) {
      if (pk.value > merged.back().value) merged.back() = pk;
    } else {
      merged.push_back(pk);
    }
  }
  if (merged.size() > 1 && merged.front().theta + kTwoPi - merged.back().theta < step) {
    if (merged.back().value > merged.front().value) merged.front() = merged.back();
    merged.pop_back();
  }
  scan.peaks = std::move(merged);
  return scan;
}

SupNormResult sup_norm(const Evaluable& g, const QuadConfig& q) {
  return summarize_scan(scan_boundary(g, q, q.tol, kSupBandRel));
}

SupNormResult summarize_scan(const BoundaryScan& scan) {
  SupNormResult out;
  out.grid_max = scan.grid_max;
  out.value = scan.grid_max;
  out.plateau = scan.plateau;
  out.plateau_start = scan.plateau_start;
  out.plateau_width = scan.plateau_width;

  double best_theta = 0.0;
  for (const BoundaryPeak& pk : scan.peaks) {
    if (pk.value >= out.value) {
      out.value = pk.value;
      best_theta = pk.theta;
      out.residual = pk.bracket;
    }
  }
  // A refined peak strictly above the plateau level still wins.
  if (scan.plateau && out.value <= scan.grid_max * (1.0 + 1e-12) + 1e-300) {
    const bool full = scan.plateau_width >= kTwoPi;
    best_theta = full ? 0.0 : scan.plateau_start + 0.5 * scan.plateau_width;
    out.residual = scan.plateau_width;
  }
  out.maximizer = std::polar(1.0, wrap_angle(best_theta));
  return out;
}

double eval_functional_norm(Complex z, const SpaceSpec& space) {
  space.validate();
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("evaluation point must lie in the open unit disk");
  return std::pow(1.0 - r2, -space.evaluation_exponent());
}

Evaluable extremal_function(Complex z_n, const SpaceSpec& space) {
  space.validate();
  const double r2 = std::norm(z_n);
  if (!(r2 < 1.0)) throw DomainError("extremal point must lie in the open unit disk");
  const double e = space.evaluation_exponent();
  const double scale = std::pow(1.0 - r2, e);
  const Complex cz = std::conj(z_n);
  return [scale, cz, e](Complex w) { return scale * std::exp(-2.0 * e * std::log(1.0 - cz * w)); };
}

double multiplied_extremal_norm(const Evaluable& g, Complex z_n, const SpaceSpec& space, const QuadConfig& q) {
  Evaluable f = extremal_function(z_n, space);
  return space_norm([&](Complex w) { return g(w) * f(w); }, space, q);
}

}  // namespace opnorm
