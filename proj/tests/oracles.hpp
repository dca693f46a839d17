#pragma once

// Brute-force reference computations used by the tests. Nothing here calls the
// library's quadrature or sup-norm code.

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Fn = std::function<Complex(Complex)>;
using Family = std::function<Complex(double, Complex)>;

inline constexpr double kPi = 3.14159265358979323846;

/// Composite midpoint rule on [a, b] with n cells.
Complex midpoint(const std::function<Complex(double)>& f, double a, double b, long n);

/// (mean over n equispaced nodes of |f(r e^{i theta})|^p)^(1/p).
double trapezoid_circle_mean(const Fn& f, double p, double r, long n);

/// ||f||_{A^p_alpha} by a polar midpoint rule with nr x ntheta cells.
double bergman_midpoint(const Fn& f, double p, double alpha, long nr, long ntheta);

struct GridMax {
  double value = 0.0;
  double theta = 0.0;
};

/// max |f(e^{i theta})| over n equispaced angles.
GridMax boundary_grid_max(const Fn& f, long n);

struct GapGrid {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = max_theta |mean_t g_t|, rhs = mean_t max_theta |g_t| over an
/// nt x ntheta midpoint/equispaced grid.
GapGrid gap_grid(const Family& g, long nt, long ntheta);

/// gap(c) for c + t + z: min(c^2, (c+1)^2) on (-1, 0), zero elsewhere.
double example_gap(double c);

/// Finite Blaschke product evaluated directly from its definition.
Complex blaschke(const std::vector<Complex>& zeros, int m, Complex z);

/// DSL text together with an independent evaluator of the same function.
struct RandomSymbol {
  std::string text;
  Family eval;
};

/// Complex constant in the DSL's bracket syntax.
std::string literal(Complex c);

/// A boundary-continuous symbol without t: a polynomial in z of degree n <= 4
/// with coefficients in the box of half-width 1/(n+1), optionally multiplied
/// by exp(a z) or a finite Blaschke product with zeros in |a| < 0.7. Both
/// bounds keep |g'| on the circle moderate.
RandomSymbol random_frozen_symbol(std::mt19937_64& rng);

/// A family polynomial in t and z, optionally with a t-dependent phase
/// exp(i pi k t) and a Blaschke factor. Satisfies W(X) by construction.
RandomSymbol random_family(std::mt19937_64& rng);

/// (a + b t) e^{i phi} p(z) with a, b > 0: maximizers and phases do not move
/// with t, so equality holds.
RandomSymbol random_aligned_family(std::mt19937_64& rng);

/// Random finite Blaschke zeros with 0.05 < |a| < max_radius.
std::vector<Complex> random_zeros(std::mt19937_64& rng, int count, double max_radius = 0.95);

}  // namespace oracle
