#pragma once

#include <functional>
#include <vector>

namespace opnorm {

/// Nodes and weights of a rule on (0,1). Weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <typename F>
  auto apply(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule mapped to (0,1).
QuadratureRule gauss_legendre(int n);

/// n-point Gauss rule for the probability measure (1+alpha)(1-s)^alpha ds on
/// (0,1), alpha > -1. Built with the Golub-Welsch eigenvalue problem and
/// Christoffel weights. Rules are cached; the returned reference stays valid
/// for the lifetime of the program.
const QuadratureRule& gauss_jacobi(int n, double alpha);

/// Trapezoid mean (1/n) sum_j f(2 pi j / n) of a 2 pi-periodic function.
double periodic_mean(const std::function<double(double)>& f, int n);

struct PeriodicMeanResult {
  double value = 0.0;
  int nodes = 0;
  bool converged = false;
};

/// Trapezoid mean with node doubling (nested, so each level only evaluates
/// the new midpoints) until successive levels agree to rel_tol.
PeriodicMeanResult adaptive_periodic_mean(const std::function<double(double)>& f, int n_start,
                                          double rel_tol, int n_max);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration on [a,b]. The
/// integrand is never evaluated at a or b. Error per panel is |K15 - G7|;
/// the panel with the largest error is bisected until the sum of errors is
/// below max(abs_tol, rel_tol * |I|).
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_intervals = 2000);

}  // namespace opnorm
