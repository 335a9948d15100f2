#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "maxrep/mc.hpp"
#include "scenario_detail.hpp"

// S3: W_t = 2^{N_t} e^{-t} with N a unit-rate Poisson counter. W is a
// positive martingale converging to 0, but its running maximum grows by
// jumps, so the ratio W/W* cannot be the conditional survival curve of
// the last-maximum time. The scenario refutes that candidate three ways:
//   - structurally, per path: a valid representation needs the maximum
//     process to move continuously, while here dW* arrives in atoms
//     (certificate check ustar_jump_at_rho fails);
//   - statistically: at a time when W sits at its maximum, the chance of
//     ever reaching a fresh maximum is q < 1, while the candidate claims
//     the ratio (= 1 there) is that probability; nested simulation puts
//     q well below 1;
//   - by mass accounting: each maximum-visit is the last one with
//     probability 1 - q, so E[#visits] (1 - q) = 1, which the nested
//     estimates reproduce.
//
// The return probability reduces to a ruin problem for the random walk
// x_k = sum_{i<=k} (g_i - ln 2), g_i iid Exp(1): a fresh maximum occurs
// iff the walk ever drops to 0 or below. Drift is 1 - ln 2 > 0 and the
// Lundberg root of 2^th = 1 + th is th = 1, so survival to slack 30
// leaves a truncation error under e^{-30}.

namespace maxrep::detail {

namespace {

const double kLn2 = std::log(2.0);
constexpr double kRefine = 9.313225746154785e-10;  // 2^-30
constexpr double kRuinSlack = 30.0;

// One return-to-maximum trial from zero slack.
bool ruin_trial(RngStream& rng) {
  double x = 0.0;
  for (;;) {
    x += rng.exponential() - kLn2;
    if (x <= 0.0) return true;
    if (x > kRuinSlack) return false;
  }
}

struct CounterPath {
  PathBundle pb;
  long entrances = 0;      // maximum visits, the initial one included
  long inner_ruins = 0;    // nested trials that reached a fresh maximum
  long inner_trials = 0;
  double amass = 0.0;      // entrances * (1 - q_hat) for this path
  double balance = 0.0;    // dU*/U*_- minus the candidate atom 1 - q_hat
                           // at the first fresh maximum, 0 when none
  bool shadow_ok = false;  // components isolated, short, finitely many
  bool max_jump_only = false;
};

CounterPath build_counter_path(std::uint64_t seed, std::uint64_t idx,
                               double horizon, long n_inner) {
  CounterPath cp;
  RngStream gaps(seed, idx, 0);

  std::vector<double> taus;
  double t = gaps.exponential();
  while (t < horizon) {
    taus.push_back(t);
    t += gaps.exponential();
  }

  const std::vector<double> marks{0.75, 1.5};
  PathBuilder b(1.0, horizon, TailMode::Truncated);
  double w = 1.0;
  double clock = 0.0;
  std::size_t next_mark = 0;
  auto emit_refine = [&](double at, double until) {
    double rt = at + kRefine;
    if (rt < until && rt < horizon)
      b.append(rt, w * std::exp(-kRefine), EventKind::Grid);
  };
  emit_refine(0.0, taus.empty() ? horizon : taus.front());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    double tau = taus[k];
    while (next_mark < marks.size() && marks[next_mark] < tau) {
      double m = marks[next_mark++];
      b.append(m, w * std::exp(-(m - clock)), EventKind::Grid);
    }
    w = 2.0 * w * std::exp(-(tau - clock));
    clock = tau;
    b.append(tau, w, EventKind::Jump);
    emit_refine(tau, k + 1 < taus.size() ? taus[k + 1] : horizon);
  }
  while (next_mark < marks.size()) {
    double m = marks[next_mark++];
    b.append(m, w * std::exp(-(m - clock)), EventKind::Grid);
  }
  CadlagPath wpath = std::move(b).build();
  CadlagPath wstar = running_max(wpath);

  // candidate survival curve: the maximal ratio itself
  PathBuilder zb(1.0, horizon, TailMode::Truncated);
  for (const PathEvent& e : wpath.events())
    zb.append_if_changed(e.time, e.value / wstar.value_at(e.time), e.kind);
  CadlagPath zcand = std::move(zb).build();

  // maximum-visit intervals read off the carrier
  std::vector<std::pair<double, double>> comps;
  double open_at = 0.0;
  bool open = true;  // W(0) = W*(0)
  double rho = 0.0;
  bool jump_only = true;
  double cur_max = 1.0;
  double first_rel_jump = 0.0;
  for (const PathEvent& e : wpath.events()) {
    bool fresh = e.value > cur_max;
    if (fresh) {
      if (first_rel_jump == 0.0)
        first_rel_jump = (e.value - cur_max) / cur_max;
      cur_max = e.value;
      if (e.kind != EventKind::Jump) jump_only = false;
      rho = e.time;
    }
    if (open && !fresh) {
      comps.emplace_back(open_at, e.time);
      open = false;
    } else if (!open && fresh) {
      open_at = e.time;
      open = true;
    }
  }
  if (open) comps.emplace_back(open_at, horizon);

  cp.entrances = static_cast<long>(comps.size());
  cp.max_jump_only = jump_only;

  ClosedTimeSet shadow = ClosedTimeSet::from_intervals(comps, horizon);
  bool iso = shadow.components().size() == comps.size() &&
             cp.entrances <= 64;
  for (std::size_t k = 0; k + 1 < comps.size(); ++k)
    iso = iso && comps[k].second < comps[k + 1].first;
  for (const auto& c : comps)
    iso = iso && (c.second - c.first) <= 2.0 * kRefine + 1e-12;
  cp.shadow_ok = iso;

  // nested return-probability trials, one block per maximum visit
  for (long e = 0; e < cp.entrances; ++e) {
    RngStream inner(seed, idx, 100 + static_cast<std::uint64_t>(e));
    for (long j = 0; j < n_inner; ++j)
      if (ruin_trial(inner)) ++cp.inner_ruins;
    cp.inner_trials += n_inner;
  }
  double q_hat = static_cast<double>(cp.inner_ruins) /
                 static_cast<double>(cp.inner_trials);
  cp.amass = static_cast<double>(cp.entrances) * (1.0 - q_hat);
  if (cp.entrances > 1) cp.balance = first_rel_jump - (1.0 - q_hat);

  cp.pb.scalars["entrances"] = static_cast<double>(cp.entrances);
  cp.pb.scalars["rho"] = rho;
  cp.pb.paths.emplace("W", std::move(wpath));
  cp.pb.paths.emplace("Wstar", std::move(wstar));
  cp.pb.paths.emplace("Z_candidate", std::move(zcand));
  return cp;
}

}  // namespace

ScenarioResult run_s3(const RunOptions& opt) {
  long n = opt.n_paths > 0 ? opt.n_paths : 10000;
  std::uint64_t seed = opt.seed ? opt.seed : 424242;
  double horizon = opt.horizon > 0 ? opt.horizon : 50.0;
  double residual_tol = opt.tol > 0 ? opt.tol : 1e-12;
  const long n_inner = 256;
  const long n_oracle = 50000;

  ScenarioResult res;
  res.ensemble.scenario = "s3_counterexample";
  res.ensemble.master_seed = seed;
  res.ensemble.dt = 0.0;
  res.ensemble.horizon = horizon;
  res.ensemble.bundles.resize(static_cast<std::size_t>(n));

  std::vector<CounterPath> cps(static_cast<std::size_t>(n));
  parallel_for_paths(static_cast<std::size_t>(n), opt.threads,
                     [&](std::size_t i) {
                       cps[i] = build_counter_path(seed, i, horizon, n_inner);
                     });

  RunReport& r = res.report;
  r.scenario = res.ensemble.scenario;
  r.seed = seed;
  r.n_paths = n;
  r.dt = 0.0;
  r.horizon = horizon;

  long shadow_ok = 0, jump_only = 0, with_fresh_max = 0, refuted_fresh = 0;
  long ruins = 0, trials = 0;
  KahanSum amass;
  KahanSum amass_sq;
  KahanSum bal;
  KahanSum bal_sq;
  for (long i = 0; i < n; ++i) {
    CounterPath& cp = cps[static_cast<std::size_t>(i)];
    if (cp.shadow_ok) ++shadow_ok;
    if (cp.max_jump_only) ++jump_only;
    ruins += cp.inner_ruins;
    trials += cp.inner_trials;
    amass.add(cp.amass);
    amass_sq.add(cp.amass * cp.amass);
    bal.add(cp.balance);
    bal_sq.add(cp.balance * cp.balance);

    VerifyOptions vo;
    vo.u_star = &cp.pb.path("Wstar");
    vo.rho = cp.pb.scalar("rho");
    vo.residual_tol = residual_tol;
    vo.support_tol = residual_tol;
    vo.bracket_tol = residual_tol;
    MmrCertificate cert =
        verify_mmr_path(cp.pb.path("Z_candidate"), cp.pb.path("W"), vo);
    cert.scenario = r.scenario;
    cert.path_id = i;
    if (cp.entrances > 1) {
      // at least one fresh maximum after time 0
      ++with_fresh_max;
      if (cert.verdict == Verdict::Refuted &&
          cert.reason == "ustar_jump_at_rho")
        ++refuted_fresh;
    }
    res.certificates.push_back(std::move(cert));
    res.ensemble.bundles[static_cast<std::size_t>(i)] = std::move(cp.pb);

    // checkpoint companion for the martingale test
    PathBundle& pb = res.ensemble.bundles[static_cast<std::size_t>(i)];
    const CadlagPath& wp = pb.path("W");
    PathBuilder mb(1.0, horizon, TailMode::Truncated);
    for (double m : {0.75, 1.5}) mb.append(m, wp.value_at(m), EventKind::Grid);
    pb.paths.emplace("mart_W", std::move(mb).build());
  }

  auto frac = [n](long c) {
    return static_cast<double>(c) / static_cast<double>(n);
  };
  auto push = [&r](const std::string& name, double est, double se, double tol,
                   bool pass) {
    r.checks.push_back({name, est, se, tol, pass});
  };

  MartingaleTestReport mw =
      empirical_martingale_test(res.ensemble, "mart_W", {0.75, 1.5});
  double worst = 0.0;
  for (const MartingaleCheck& c : mw.checks)
    if (c.se > 0.0) worst = std::max(worst, std::abs(c.estimate) / c.se);
  push("martingale_W", worst, 1.0, mw.k, mw.all_pass);

  push("shadow_components_isolated", frac(shadow_ok), 0.0, 0.0,
       shadow_ok == n);
  push("max_increase_is_jump", frac(jump_only), 0.0, 0.0, jump_only == n);
  push("refuted_at_fresh_max", static_cast<double>(refuted_fresh), 0.0, 0.0,
       with_fresh_max > 0 && refuted_fresh == with_fresh_max);

  // independent ruin oracle for the return probability
  RngStream orng(seed, 999983, 2);
  NestedEstimate oracle =
      nested_binomial(n_oracle, [&](long) { return ruin_trial(orng); });
  push("oracle_return_prob_interior", oracle.p_hat, oracle.se, 3.0 * oracle.se,
       oracle.p_hat - 3.0 * oracle.se > 0.0 &&
           oracle.p_hat + 3.0 * oracle.se < 1.0);

  double q_pool = static_cast<double>(ruins) / static_cast<double>(trials);
  double q_se = std::sqrt(q_pool * (1.0 - q_pool) / static_cast<double>(trials));
  push("nested_return_prob_below_one", q_pool, q_se, 3.0 * q_se,
       q_pool + 3.0 * q_se < 1.0);

  double gap_se = std::sqrt(q_se * q_se + oracle.se * oracle.se);
  push("nested_matches_oracle", q_pool - oracle.p_hat, gap_se, 3.0 * gap_se,
       std::abs(q_pool - oracle.p_hat) <= 3.0 * gap_se);

  double mean = amass.value() / static_cast<double>(n);
  double var = std::max(
      0.0, amass_sq.value() / static_cast<double>(n) - mean * mean);
  double mse = std::sqrt(var / static_cast<double>(n));
  push("projection_total_mass", mean, mse, 3.0 * mse,
       std::abs(mean - 1.0) <= 3.0 * mse);

  // For a valid representation, the relative maximum jump at a shadow
  // re-entry balances the dual-projection atom there in expectation. The
  // candidate pays the atom 1 - q at a fresh maximum but gains mean
  // relative jump (1 - q)/q per entrance, so the gap stays positive.
  double bmean = bal.value() / static_cast<double>(n);
  double bvar = std::max(
      0.0, bal_sq.value() / static_cast<double>(n) - bmean * bmean);
  double bse = std::sqrt(bvar / static_cast<double>(n));
  push("candidate_entrance_balance_broken", bmean, bse, 3.0 * bse,
       std::abs(bmean) > 3.0 * bse);

  res.ok = res.report.all_pass();
  return res;
}

}  // namespace maxrep::detail
