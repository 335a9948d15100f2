#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "maxrep/report.hpp"
#include "maxrep/rng.hpp"
#include "maxrep/scenarios.hpp"

namespace maxrep::detail {

// Event-driven scenarios place every drawn time on a dyadic lattice so
// that times, their differences, and the slope values built from them
// are exact in double precision; comparisons between independently
// computed carriers can then demand bitwise equality.
inline constexpr double kLattice = 9.5367431640625e-07;  // 2^-20
inline constexpr double kLatticeInv = 1048576.0;         // 2^20

inline double snap_to_lattice(double x, double horizon) {
  double k = std::nearbyint(x * kLatticeInv);
  double hi = (horizon - 1.0) * kLatticeInv;
  if (k < 1.0) k = 1.0;
  if (k > hi) k = hi;
  return k * kLattice;
}

inline double draw_exp_on_lattice(RngStream& rng, double horizon) {
  return snap_to_lattice(rng.exponential(1.0), horizon);
}

ScenarioResult run_s1(const RunOptions& opt);
ScenarioResult run_s2(const RunOptions& opt);
ScenarioResult run_s5(const RunOptions& opt);
ScenarioResult run_s6(const RunOptions& opt);
ScenarioResult run_s7(const RunOptions& opt);
ScenarioResult run_s3(const RunOptions& opt);
ScenarioResult run_s4(const RunOptions& opt);
ScenarioResult run_finite(const RunOptions& opt);

}  // namespace maxrep::detail
