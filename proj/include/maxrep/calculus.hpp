#pragma once

#include "maxrep/path.hpp"

namespace maxrep {

// Split of a path into its sampled-flow part and its pure-jump part; the
// two sum back to the input at every event time.
struct PathDecomposition {
  CadlagPath continuous_part;  // Grid increments only
  CadlagPath jump_part;        // Jump increments only
};

PathDecomposition decompose(const CadlagPath& x);

// Left-limit stochastic integral: sum of H(s-) times the increment of X
// over every event of X. Throws on mismatched horizons.
CadlagPath integrate_left(const CadlagPath& h, const CadlagPath& x);

// Quadratic covariation: products of jump increments at shared Jump times
// plus products of grid increments at shared Grid times (the sampled
// bracket of the diffusion parts). Mixed kinds contribute nothing.
CadlagPath covariation(const CadlagPath& x, const CadlagPath& y);

// Covariation restricted to genuine jumps; exact for finite-variation
// flows whose sampled bracket would only add discretization noise.
CadlagPath jump_covariation(const CadlagPath& x, const CadlagPath& y);

// Stochastic exponential. Grid increments are treated as finite-variation
// flow (multiplicative factor e^delta, accumulated in log space); jump
// increments contribute factors (1 + delta). A jump of -1 absorbs at 0.
CadlagPath stoch_exp(const CadlagPath& x);

struct RatioDecomposition {
  CadlagPath z;     // U / running_max(U), evaluated at event times
  double residual;  // max deviation of z from its integral reconstruction
};

// Z = U/U* together with the self-consistency residual
// max_t |Z_t - (1 + ((1/U*_-)·U)_t - ((1/U*_-)·U*)_t)|.
// Requires U(0) = 1 and U >= 0.
RatioDecomposition ratio_decomposition(const CadlagPath& u);

struct GexpForward {
  CadlagPath u;       // 1 + E(gamma)_- · w
  CadlagPath gamma;   // running max of w, floored at 0
  CadlagPath u_star;  // stoch_exp(gamma)
  bool ok;            // U >= 0 and running_max(U) = u_star within 1e-12
};

// Forward construction of the drawdown representation from a driver w with
// w(0) = 0; requires gamma - w <= 1 on the horizon (throws at the first
// violation time otherwise).
GexpForward gexp_forward(const CadlagPath& w);

struct SupMultip {
  CadlagPath y;  // e^v X
  bool ok;       // running_max(e^v X) = e^v running_max(X) within 1e-12
};

// Multiplies X by e^v where v is non-decreasing, stopped at T, with dv
// carried on {X_- = X*_-} and no v-jump meeting a downward X-jump.
// Throws naming the violated precondition.
SupMultip supmultip_transform(const CadlagPath& x, const CadlagPath& v,
                              double T);

}  // namespace maxrep
