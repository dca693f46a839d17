#pragma once

#include <string>
#include <vector>

#include "opnorm/operator_lab.hpp"
#include "opnorm/spaces.hpp"
#include "opnorm/symbol.hpp"

namespace opnorm {

enum class WxVerdict { PassEvidence, FailWithWitness, Inconclusive };
enum class CertVerdict { EqualityCertified, StrictInequalityEvidence, Inconclusive };

std::string to_string(WxVerdict v);
std::string to_string(CertVerdict v);

// ---------------------------------------------------------------------------
// W(X) evidence for a family of multiplication operators
// ---------------------------------------------------------------------------

/// Continuity in t: ||g_{t0 +- delta} - g_{t0}||_X for decreasing delta.
struct WxContinuitySample {
  double t0 = 0.0;
  std::vector<double> deltas;
  std::vector<double> distances;  // max over the two sides
  WxVerdict verdict = WxVerdict::Inconclusive;
};

/// sup of ||g_t||_inf over [eps, 1 - eps].
struct WxBoundSample {
  double epsilon = 0.0;
  double sup = 0.0;
  double argsup_t = 0.0;
  WxVerdict verdict = WxVerdict::Inconclusive;
};

/// int ||g_t||_inf dt truncated to [2^-L, 1 - 2^-L] for doubled L.
struct WxIntegrability {
  std::vector<int> levels;
  std::vector<double> estimates;
  double estimate = 0.0;
  double delta = 0.0;              // change between the two deepest levels
  double relative_increase = 0.0;  // (I_16 - I_8) / I_8
  WxVerdict verdict = WxVerdict::Inconclusive;
};

struct WxReport {
  std::vector<WxContinuitySample> cond1;
  std::vector<WxBoundSample> cond2;
  WxIntegrability cond3;
  WxVerdict cond1_verdict = WxVerdict::Inconclusive;
  WxVerdict cond2_verdict = WxVerdict::Inconclusive;
  WxVerdict verdict = WxVerdict::Inconclusive;
  std::string witness;
  std::vector<std::string> diagnostics;
};

/// 16 uniform probes (k + 1/2) / 16.
std::vector<double> default_t_probe();

WxReport check_wx(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q,
                  const std::vector<double>& t_probe);

// ---------------------------------------------------------------------------
// Argmax sets and the equality certificate
// ---------------------------------------------------------------------------

/// Closed arc [start, start + width] of the circle (radians).
struct Arc {
  double start = 0.0;
  double width = 0.0;
  double centre() const { return start + 0.5 * width; }
};

struct ArgmaxSet {
  /// Sentinel: every boundary point is a maximizer (|g_t| constant on the
  /// circle or ||g_t||_inf below tolerance).
  bool whole_circle = false;
  std::vector<Arc> arcs;
  double sup = 0.0;

  std::vector<Complex> points() const;
};

/// Refined local maxima of |g_t| within `band` of ||g_t||_inf, each widened to
/// an arc of angular radius 2 pi / n_theta.
ArgmaxSet argmax_set(const SymbolFamily& f, double t, const QuadConfig& q, double band);

/// Intersection on the circle; the whole-circle sentinel is the identity.
ArgmaxSet intersect(const ArgmaxSet& a, const ArgmaxSet& b);

struct Residuals {
  /// Minkowski defect int |g_t(xi)| dt - |int g_t(xi) dt| on the Gauss t-rule.
  double r1 = 0.0;
  /// max_t (||g_t||_inf - |g_t(xi)|) over the certification t-grid.
  double r2 = 0.0;
};

/// The certification t-grid: the Gauss t-rule nodes plus default_t_probe(),
/// sorted.
std::vector<double> certification_t_grid(const QuadConfig& q);

Residuals i1_i2_residuals(const SymbolFamily& f, const SpaceSpec& space, Complex xi, const QuadConfig& q);

struct Candidate {
  Complex xi;
  Complex theta{1.0, 0.0};
  double i2_residual = 0.0;
  double i1_residual = 0.0;
  /// max_t |theta g_t(xi) - |g_t(xi)||. Reported only: a flat maximum pins xi
  /// to about sqrt(eps) in angle and this first-order quantity inherits that.
  double phase_residual = 0.0;
  bool passes = false;
};

struct CertificateReport {
  std::vector<Candidate> candidates;
  CertVerdict verdict = CertVerdict::Inconclusive;
  double gap_crosscheck = 0.0;
  GapReport gap;
  double tol = 0.0;
  double band = 0.0;
  std::vector<std::string> notes;
};

CertificateReport certify_equality(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q);

}  // namespace opnorm
