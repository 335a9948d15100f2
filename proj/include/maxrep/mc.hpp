#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "maxrep/path.hpp"
#include "maxrep/rng.hpp"

namespace maxrep {

// Everything one sampled outcome carries: named trajectories plus named
// scalar draws (entrance times, jump sizes, ...).
struct PathBundle {
  std::map<std::string, CadlagPath> paths;
  std::map<std::string, double> scalars;

  const CadlagPath& path(const std::string& name) const;
  double scalar(const std::string& name) const;
};

struct Ensemble {
  std::string scenario;
  std::uint64_t master_seed = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<PathBundle> bundles;
};

// Unit-jump counting path with Exp(rate) inter-arrivals.
CadlagPath simulate_poisson(double rate, double horizon, RngStream& rng);

// Kolmogorov-Smirnov distance between the sample and Exp(rate).
double ks_exp_statistic(std::vector<double> sample, double rate);

struct MartingaleCheck {
  double s = 0.0;
  double t = 0.0;
  std::string functional;
  double estimate = 0.0;
  double se = 0.0;
  long n = 0;
  bool pass = false;
};

struct MartingaleTestReport {
  std::string process;
  double k = 3.0;
  std::vector<MartingaleCheck> checks;
  bool all_pass = true;
};

// Tests E[(X_t - X_s) h(X|_{[0,s]})] = 0 over consecutive checkpoint pairs
// for a fixed library of adapted weights: constant 1, the value at s, an
// indicator that the running max up to s stays below a median threshold
// (calibrated on a disjoint prefix of the ensemble), and sin of the value
// at s. Verdict per check: |estimate| <= k * SE.
// Grid segments are read as linear motion when sampling between events,
// so sampled flows are not evaluated stale.
MartingaleTestReport empirical_martingale_test(
    const Ensemble& ensemble, const std::string& process_name,
    const std::vector<double>& checkpoints, double k = 3.0);

struct NestedEstimate {
  double p_hat = 0.0;
  double se = 0.0;
  long n = 0;
  double tail_bound = 0.0;  // declared truncation bias, scenario-specific
};

// Resamples n futures of a Markov state and counts predicate hits.
template <class Trial>
NestedEstimate nested_binomial(long n, Trial&& trial) {
  long hits = 0;
  for (long i = 0; i < n; ++i) hits += trial(i) ? 1 : 0;
  NestedEstimate out;
  out.n = n;
  out.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  out.se = std::sqrt(out.p_hat * (1.0 - out.p_hat) / static_cast<double>(n));
  return out;
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Runs fn(path_index) for indices [0, n) across `threads` workers; with
// one thread the loop is plain and sequential. Exceptions propagate.
void parallel_for_paths(std::size_t n, int threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace maxrep
