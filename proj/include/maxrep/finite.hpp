#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maxrep {

using Rat = boost::multiprecision::cpp_rational;

// Finite outcome space with a filtration given as refining partitions.
// cell_of[n][omega] is the index of omega's cell in partition P_n.
struct FiniteProbModel {
  std::vector<Rat> prob;
  std::vector<std::vector<int>> cell_of;

  int periods() const { return static_cast<int>(cell_of.size()) - 1; }
  int n_outcomes() const { return static_cast<int>(prob.size()); }
  int n_cells(int n) const;
  std::vector<std::vector<int>> cells(int n) const;
  void validate() const;  // refinement, positivity, total mass 1

  // Full b-ary tree on `periods` levels; up_prob[n] weights branch 0 at
  // level n, the rest split evenly. P_0 is trivial.
  static FiniteProbModel tree(int periods, int branching,
                              const std::vector<Rat>& first_branch_prob);
};

// values[n][omega]; column n must be constant on every P_n cell.
struct AdaptedProcess {
  std::vector<std::vector<Rat>> values;
  int periods() const { return static_cast<int>(values.size()) - 1; }
};

// Arbitrary random period per outcome; not required to be a stopping time.
struct FiniteRandomTime {
  std::vector<int> value;
};

std::vector<Rat> cond_expect(const FiniteProbModel& model,
                             const std::vector<Rat>& x, int n);

bool is_adapted(const FiniteProbModel& model, const AdaptedProcess& x);
bool is_stopping_time(const FiniteProbModel& model,
                      const FiniteRandomTime& s);

// The four projections of a random time plus the derived martingales:
// Z_n = P[rho > n | P_n], Zt_n = P[rho >= n | P_n],
// dA_n = E[1_{rho=n} | P_n] (optional dual increment),
// da_n = E[1_{rho=n} | P_{n-1}] (predictable dual increment),
// M = Z + A, m = Z + a with A, a cumulative. C is the shadow {Zt = 1}.
struct AzemaAnalysis {
  AdaptedProcess Z, Zt, A, a, M, m;
  std::vector<std::vector<bool>> C;
};

AzemaAnalysis azema_analysis(const FiniteProbModel& model,
                             const FiniteRandomTime& rho);

// Honest means the time is the end of some adapted set; equivalently the
// strong supermartingale Zt equals 1 at the time itself.
bool is_honest(const FiniteProbModel& model, const FiniteRandomTime& rho,
               const AzemaAnalysis& an);
// Brute-force cross-check: enumerate every adapted set O and test whether
// rho(omega) = sup{n : (omega, n) in O}. Exponential; small models only.
bool is_honest_blind(const FiniteProbModel& model,
                     const FiniteRandomTime& rho);

struct InfeasibleCertificate {
  int period = -1;
  int parent_cell = -1;
  Rat rhs;  // compensator mass that no admissible cell can absorb
};

struct MmrSearchResult {
  bool feasible = false;
  AdaptedProcess gamma;  // cumulative, when feasible
  InfeasibleCertificate certificate;
};

// Exact linear feasibility for an adapted non-decreasing gamma with
// d(gamma) supported on {Z = 1} and -A + gamma a martingale. Each
// constraint involves its own variables only, so feasibility decomposes
// cell by cell.
MmrSearchResult mmr_search(const FiniteProbModel& model,
                           const AdaptedProcess& Z, const AdaptedProcess& A);

struct MmrConstruction {
  AdaptedProcess U, Ustar;
  bool nonneg = true;
  bool ratio_matches_Z = true;  // Z == U / Ustar at every node
};

MmrConstruction mmr_construct(const FiniteProbModel& model,
                              const AdaptedProcess& Z,
                              const AdaptedProcess& gamma);

// Exact per-step martingale verdicts for X: step n passes when
// E[X_n - X_{n-1} | P_{n-1}] = 0 on every cell.
std::vector<bool> martingale_steps(const FiniteProbModel& model,
                                   const AdaptedProcess& x);

// Exact identities tying a stopped observer at S to one at T >= S through
// the last visit G_T of the shadow:
//   1 - Z_S = E[(1 - Z_T) 1_{G_T <= S} | F_S]
//   1 - Zt_S = E[(1 - Zt_T) 1_{G_T < S} | F_S]
bool relative_martingale_check(const FiniteProbModel& model,
                               const AzemaAnalysis& an,
                               const FiniteRandomTime& S,
                               const FiniteRandomTime& T);

struct HonestSupportReport {
  bool dA_on_shadow = true;       // dA mass only where Zt = 1
  bool jump_set_matches = true;   // {dA > 0} = {Zt > Z} for n >= 1
  bool zminus_in_shadow = true;   // Z_{n-1} = 1 implies (omega, n) in C
  bool zt_eq_z_off_shadow = true; // Zt = Z outside C
  bool zero_after_R = true;       // Z = 0 from the first zero of Z onward
  bool ok() const {
    return dA_on_shadow && jump_set_matches && zminus_in_shadow &&
           zt_eq_z_off_shadow && zero_after_R;
  }
};

HonestSupportReport honest_support_checks(const FiniteProbModel& model,
                                          const FiniteRandomTime& rho,
                                          const AzemaAnalysis& an);

struct ModifReport {
  AdaptedProcess gamma_hat;
  bool pre_ok = false;
  Rat pre_residual;                      // worst cell residual of the balance
  bool monotone = true;
  bool support_ok = true;                // d(gamma_hat) on {Z = 1}
  std::vector<bool> martingale_step_ok;  // -A + gamma_hat, per step
};

// Replaces the gamma increment at a deterministic period T by xi (a
// nonnegative P_T-measurable weight) when the exact balance
// E[-dA_T + xi 1_{dgamma_T > 0} | P_{T-1}] = 0 holds.
ModifReport modif_predictable(const FiniteProbModel& model,
                              const AdaptedProcess& Z,
                              const AdaptedProcess& A,
                              const AdaptedProcess& gamma, int T,
                              const std::vector<Rat>& xi);

std::vector<FiniteRandomTime> enumerate_stopping_times(
    const FiniteProbModel& model);

// All random times with values in [lo, hi]^outcomes; count grows fast.
std::vector<FiniteRandomTime> enumerate_random_times(
    const FiniteProbModel& model, int lo, int hi);

std::string model_to_json(
    const FiniteProbModel& model,
    const std::map<std::string, AdaptedProcess>& processes);

// ---------------------------------------------------------------------
// Enumeration suite: every tree shape in the configured budget, every (or
// a seeded sample of) random times, all exact identities, plus the
// documented infeasibility of the compensator search.

struct FiniteSuiteConfig {
  int max_periods = 4;       // guard: <= 5
  int max_branching = 2;     // 3 adds a small ternary block
  std::uint64_t seed = 1;    // for the sampled blocks
  bool inject_fault = false; // mutation hook: corrupt one Zt atom
};

struct FiniteSuiteReport {
  long cases = 0;
  long identity_failures = 0;
  long infeasible_count = 0;
  long feasible_count = 0;
  long honest_count = 0;
  long honest_mismatches = 0;   // primary vs blind enumeration disagreement
  long variant2_violations = 0; // {Z=1 or Z_-=1} subset of C, reported only
  long relative_pairs_checked = 0;
  long relative_refuted = 0;    // non-honest cases refuted by a witness pair
  long relative_unrefuted = 0;  // non-honest cases the witness pair missed
  std::vector<std::string> witnesses;  // first few failures, human-readable
  bool ok() const {
    return identity_failures == 0 && feasible_count == 0 &&
           honest_mismatches == 0 && relative_unrefuted == 0;
  }
};

FiniteSuiteReport run_finite_suite(const FiniteSuiteConfig& cfg);

}  // namespace maxrep
