#include "opnorm/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>

namespace opnorm {
namespace {

// Recurrence coefficients of the monic Jacobi polynomials for the weight
// (1-x)^a (1+x)^b on [-1,1]: diagonal alpha_k and squared off-diagonal beta_k.
void jacobi_recurrence(int n, double a, double b, std::vector<double>& diag,
                       std::vector<double>& offdiag_sq) {
  diag.assign(n, 0.0);
  offdiag_sq.assign(n, 0.0);
  const double ab = a + b;
  diag[0] = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 1) {
      offdiag_sq[k] = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      offdiag_sq[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
}

QuadratureRule build_gauss(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature rule needs at least one node");
  std::vector<double> diag, offdiag_sq;
  jacobi_recurrence(n, a, b, diag, offdiag_sq);

  Eigen::VectorXd d(n);
  Eigen::VectorXd e(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) d[k] = diag[k];
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(offdiag_sq[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigensolve failed");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = solver.eigenvalues()[i];
    // Christoffel function of the orthonormal system (unit total mass).
    double p_prev = 0.0;
    double p = 1.0;
    double sum = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
      const double next_norm = std::sqrt(offdiag_sq[k + 1]);
      const double prev_norm = k == 0 ? 0.0 : std::sqrt(offdiag_sq[k]);
      const double p_next = ((x - diag[k]) * p - prev_norm * p_prev) / next_norm;
      p_prev = p;
      p = p_next;
      sum += p * p;
    }
    rule.nodes[i] = 0.5 * (1.0 + x);
    rule.weights[i] = 1.0 / sum;
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1,1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureRule gauss_legendre(int n) { return build_gauss(n, 0.0, 0.0); }

const QuadratureRule& gauss_jacobi(int n, double alpha) {
  if (!(alpha > -1.0)) throw std::invalid_argument("Jacobi exponent must exceed -1");
  static std::mutex mutex;
  static std::map<std::pair<int, double>, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_gauss(n, alpha, 0.0)).first;
  return it->second;
}

double periodic_mean(const std::function<double(double)>& f, int n) {
  double sum = 0.0;
  const double h = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) sum += f(h * j);
  return sum / n;
}

PeriodicMeanResult adaptive_periodic_mean(const std::function<double(double)>& f, int n_start,
                                          double rel_tol, int n_max) {
  PeriodicMeanResult out;
  int n = std::max(n_start, 1);
  double sum = 0.0;
  const double h0 = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) sum += f(h0 * j);
  double mean = sum / n;
  while (n < n_max) {
    const double h = 2.0 * std::numbers::pi / n;
    double mid = 0.0;
    for (int j = 0; j < n; ++j) mid += f(h * (j + 0.5));
    sum += mid;
    n *= 2;
    const double next = sum / n;
    const bool done = std::abs(next - mean) <= rel_tol * std::abs(next) || next == mean;
    mean = next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.value = mean;
  out.nodes = n;
  return out;
}

// Narrower panels signal a non-integrable or non-smooth integrand; stop there.
constexpr double kMinPanelFraction = 1e-13;

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_intervals) {
  std::priority_queue<Panel> heap;
  Panel first = kronrod_panel(f, a, b);
  heap.push(first);
  double value = first.value;
  double error = first.error;
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && intervals < max_intervals) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a < kMinPanelFraction * (b - a)) {
      heap.push(worst);
      break;
    }
    Panel left = kronrod_panel(f, worst.a, mid);
    Panel right = kronrod_panel(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++intervals;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Final totals summed in a fixed order (by left endpoint).
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  AdaptiveResult out;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  out.intervals = intervals;
  out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
  return out;
}

}  // namespace opnorm
