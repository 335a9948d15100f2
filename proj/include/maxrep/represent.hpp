#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "maxrep/path.hpp"

namespace maxrep {

// =====================================================================
// Maximal representation engine: build the martingale U whose running
// max carries a given ratio process, pull the compensator back out of a
// candidate U, certify or refute a pair, and apply the two transforms
// that move between equivalent compensators.
// =====================================================================

struct MmrSolution {
  CadlagPath u;
  CadlagPath u_star;  // running max including flow inside grid segments
};

// Forward recursion for U = 1 + integral of U*_{s-} d(Z + gamma)_s on the
// merged event grid. Grid increments are treated as continuous flow over
// the segment they compress (exponential while U sits at its max, linear
// below it); jump increments apply atomically, after the grid part of a
// tied time. While U rides its max the exponent is accumulated and each
// emitted value is one exp() of the exact accumulated sum, so equal
// drivers yield bitwise equal outputs.
//
// Throws std::invalid_argument on mismatched horizons, Z(0) != 1, Z < 0,
// or decreasing gamma; std::domain_error when U would go negative.
MmrSolution sde_solve_mmr(const CadlagPath& z, const CadlagPath& gamma);

// gamma = integral of dU*/U*_{-}: log-ratio for grid rises of the max
// (flow happens at U = U*), relative increment for jump rises.
CadlagPath extract_gamma(const CadlagPath& u, const CadlagPath& u_star);
CadlagPath extract_gamma(const CadlagPath& u);  // u_star = running_max(u)

enum class Verdict { Valid, ValidOnHorizon, Refuted };
std::string to_string(Verdict v);

struct CheckOutcome {
  std::string name;
  bool pass = false;
  double value = 0.0;  // residual, escaped mass, bracket mass, ...
};

struct MmrCertificate {
  std::string scenario;
  long path_id = -1;
  double max_residual = 0.0;
  std::vector<CheckOutcome> checks;
  Verdict verdict = Verdict::Refuted;
  std::string reason;  // first failing check when refuted
};

struct VerifyOptions {
  const CadlagPath* u_star = nullptr;  // solver max; running_max(u) if null
  const CadlagPath* a = nullptr;       // optional raw compensator for brackets
  double rho = std::numeric_limits<double>::quiet_NaN();  // last-max time
  double residual_tol = 1e-12;
  double support_tol = 1e-12;
  double bracket_tol = 1e-12;
};

// Per-path certificate: residual max|Z - U/U*| over event times, support
// of dU* inside {Z = 1}, optional [A, U*] = 0 and jump-location checks,
// vanishing of the U* jump at the last-max time. VALID requires an
// absorbed-at-zero tail; a clean truncated path is VALID-ON-HORIZON.
MmrCertificate verify_mmr_path(const CadlagPath& z, const CadlagPath& u,
                               const VerifyOptions& opt = {});

// U' = U e^v / (1 + U_{T-}^{-1} (Delta_T U) 1_{[T, infty)}): strips the
// jump at T and reinstates its compensator v as continuous flow. T may
// be +infinity, in which case U' = U e^v. Throws std::domain_error when
// T is finite and U has no positive jump there, or when v is not
// continuous.
CadlagPath remove_ti_jump(const CadlagPath& u, double T, const CadlagPath& v);

// gamma_hat = gamma - (Delta_T gamma 1_{[T,infty)} - v)
//                   + (xi 1_{[T,infty)} - v_prime):
// swaps the jump xi for part of the jump at T, compensators supplied by
// the caller. Throws std::domain_error on xi outside [0, Delta_T gamma],
// a non-continuous v/v_prime, or a monotonicity violation (message
// carries the first bad time).
CadlagPath compensator_swap_ti(const CadlagPath& gamma, double T, double xi,
                               const CadlagPath& v, const CadlagPath& vprime);

}  // namespace maxrep
