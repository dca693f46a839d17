#pragma once

#include <string>
#include <vector>

#include "opnorm/spaces.hpp"
#include "opnorm/symbol.hpp"

namespace opnorm {

/// Points z_k = (1 - 2^-k) xi, k = 1..K, concentrating at xi on the circle.
/// The induced extremal functions form an approximate evaluation map.
struct ApproxEvalMap {
  Complex xi{1.0, 0.0};
  std::vector<Complex> points;
  /// |g(z_k)| along the sequence.
  std::vector<double> moduli;
  SpaceSpec space;
  double target = 0.0;  // ||g||_inf
  bool converged = false;
};

/// ||M_g|| = EN(M_g) = ||g||_inf on H^p and A^p_alpha.
double mult_operator_norm(const Evaluable& g, const SpaceSpec& space, const QuadConfig& q);

ApproxEvalMap maximizing_sequence(const Evaluable& g, const SpaceSpec& space, int K, const QuadConfig& q);

/// z -> int_0^1 g_t(z) dt on the Gauss t-rule of q.
Evaluable integrated_symbol(const SymbolFamily& f, const QuadConfig& q);

struct PerTSample {
  double t;
  double sup;
  Complex maximizer;
};

/// Both sides of EN(int M_{g_t} dt) <= int EN(M_{g_t}) dt.
struct GapReport {
  SpaceSpec space;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  /// Error estimate of the adaptive t-integral on the right-hand side.
  double rhs_error = 0.0;
  std::vector<PerTSample> per_t;  // sorted by t
  Complex integrated_maximizer{1.0, 0.0};
  std::vector<std::string> flags;
};

/// The right-hand side integrand t -> ||g_t||_inf is integrated with a
/// globally adaptive Gauss-Kronrod rule (interior nodes only), since it is in
/// general only piecewise smooth in t.
GapReport gap_report(const SymbolFamily& f, const SpaceSpec& space, const QuadConfig& q);

}  // namespace opnorm
