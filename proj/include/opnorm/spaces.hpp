#pragma once

#include <string>
#include <vector>

#include "opnorm/quadrature.hpp"
#include "opnorm/symbol.hpp"

namespace opnorm {

enum class SpaceKind { Hardy, Bergman };

/// X = H^p or X = A^p_alpha.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::Hardy;
  double p = 2.0;
  double alpha = 0.0;

  static SpaceSpec hardy(double p) { return {SpaceKind::Hardy, p, 0.0}; }
  static SpaceSpec bergman(double p, double alpha) { return {SpaceKind::Bergman, p, alpha}; }

  /// Throws DomainError. Certification requires p > 1 (reflexive range).
  void validate(bool for_certification = false) const;

  /// Exponent e with ||delta_z|| = (1 - |z|^2)^(-e): 1/p or (2+alpha)/p.
  double evaluation_exponent() const;

  std::string name() const;
};

struct QuadConfig {
  int n_theta = 512;
  int n_radial = 32;
  std::vector<double> hardy_radii = {0.5, 0.75, 0.9, 0.95, 0.99};
  int n_t = 64;
  int sup_refine_iters = 100;
  double tol = 1e-8;

  /// Throws DomainError naming the offending field.
  void validate() const;

  QuadratureRule t_rule() const { return gauss_legendre(n_t); }
};

/// ||f||_{H^p}. Circle means M_p(r) are computed on hardy_radii and checked to
/// be nondecreasing. When f can be evaluated on the unit circle the limit is
/// the boundary mean (continuity of the means up to r = 1); otherwise it is
/// extrapolated from the interior radii. Throws QuadratureError when the
/// means decrease beyond tolerance.
double hardy_norm(const Evaluable& f, double p, const QuadConfig& q);

/// Circle mean M_p(r) = (int |f(r e^{i theta})|^p dm)^{1/p}.
double circle_mean(const Evaluable& f, double p, double r, const QuadConfig& q);

/// ||f||_{A^p_alpha} against (1+alpha)(1-|z|^2)^alpha dA, with Gauss-Jacobi
/// in s = |z|^2 and an adaptive trapezoid in the angle.
double bergman_norm(const Evaluable& f, double p, double alpha, const QuadConfig& q);

double space_norm(const Evaluable& f, const SpaceSpec& space, const QuadConfig& q);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SupNormResult {
  double value = 0.0;
  Complex maximizer{1.0, 0.0};
  /// Width of the final refinement bracket, or the plateau width.
  double residual = 0.0;
  double grid_max = 0.0;
  bool plateau = false;
  /// Plateau arc as [start, start + width] in radians (valid when plateau).
  double plateau_start = 0.0;
  double plateau_width = 0.0;
};

/// max |g| on the unit circle: dense sampling followed by golden-section
/// refinement of every grid local maximum close to the grid maximum.
SupNormResult sup_norm(const Evaluable& g, const QuadConfig& q);

/// Local maxima of |g| on the circle, refined. Shared by sup_norm and the
/// argmax search in the certifier.
struct BoundaryPeak {
  double theta;
  double value;
  double bracket;
};
struct BoundaryScan {
  std::vector<BoundaryPeak> peaks;  // sorted by theta
  double grid_max = 0.0;
  bool plateau = false;
  double plateau_start = 0.0;
  double plateau_width = 0.0;
};
/// Candidate grid maxima are those within max(band_abs, band_rel * grid_max)
/// of the grid maximum.
BoundaryScan scan_boundary(const Evaluable& g, const QuadConfig& q, double band_abs, double band_rel = 0.0);

/// Best refined peak of a scan; a plateau reports its midpoint and width.
SupNormResult summarize_scan(const BoundaryScan& scan);

/// (1 - |z|^2)^(-1/p) on H^p, (1 - |z|^2)^(-(2+alpha)/p) on A^p_alpha.
double eval_functional_norm(Complex z, const SpaceSpec& space);

/// The unit-norm function attaining ||delta_{z_n}||:
/// w -> (1-|z_n|^2)^e / (1 - conj(z_n) w)^(2e), e = evaluation_exponent(),
/// principal branch (Re(1 - conj(z_n) w) > 0 on the closed disk).
Evaluable extremal_function(Complex z_n, const SpaceSpec& space);

/// ||g f_n||_X for the extremal function at z_n.
double multiplied_extremal_norm(const Evaluable& g, Complex z_n, const SpaceSpec& space,
                                const QuadConfig& q);

}  // namespace opnorm
