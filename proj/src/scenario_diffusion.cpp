#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "maxrep/mc.hpp"
#include "scenario_detail.hpp"

// S4: U_t = exp(B_t - t/2), the canonical continuous positive martingale
// vanishing at infinity. Sampled exactly in log space on a fixed grid;
// barrier hits between grid points are resolved with the Brownian-bridge
// crossing probability exp(-2(L-x)(L-x')/dt), which makes every hitting
// estimate distributionally exact for the continuous path, so the only
// declared error terms are the finite horizon (measured as the terminal
// deficit) and plain Monte Carlo noise.
//
// Checked here, all conditioned on one reference path's state (U_t, U*_t):
//   - P[fresh maximum after t | state] = U_t / U*_t  (threshold at U*_t)
//   - P[sup_{s>t} U >= m U_t | state] = 1/m          (thresholds above U_t)
// plus the unconditional forms from time 0 on the whole ensemble, the
// martingale battery for U and for U/U* + log U*, and a certificate &
// round trip on the reference path.

namespace maxrep::detail {

namespace {

struct BarrierTally {
  long hits = 0;
  double p_hat = 0.0;
  double se = 0.0;
  double deficit = 0.0;  // mean of exp(X_H - L) over the no-hit runs
};

// One uniform per step drives every barrier: the bridge maximum exceeds
// level L with probability q(L), and q is monotone in L, so u < q(L_j)
// reproduces the exact joint law of the crossing indicators.
template <std::size_t NB>
struct BridgeWalk {
  std::array<double, NB> levels{};
  std::array<bool, NB> hit{};
  double x = 0.0;

  bool all_hit() const {
    for (bool h : hit)
      if (!h) return false;
    return true;
  }
  void step(double x_next, double dt, double u) {
    for (std::size_t j = 0; j < NB; ++j) {
      if (hit[j]) continue;
      double L = levels[j];
      if (x >= L || x_next >= L) {
        hit[j] = true;
      } else {
        double q = std::exp(-2.0 * (L - x) * (L - x_next) / dt);
        if (u < q) hit[j] = true;
      }
    }
    x = x_next;
  }
};

constexpr long kInnerDefault = 2000;
const std::vector<double> kCpTimes{1.0, 2.0, 3.0, 4.0, 5.0};
const char* kThrNames[4] = {"rho", "x2", "x4", "x8"};

struct OuterPath {
  std::array<double, 5> x_cp{};     // log U at the checkpoints
  std::array<double, 5> star_cp{};  // log running max at the checkpoints
  double x_final = 0.0;
  std::array<bool, 2> hit{};  // levels log 2, log 4 from time 0
};

struct InnerOut {
  std::uint8_t hit_mask = 0;
  double x_final = 0.0;
};

}  // namespace

ScenarioResult run_s4(const RunOptions& opt) {
  long n = opt.n_paths > 0 ? opt.n_paths : 2000;
  std::uint64_t seed = opt.seed ? opt.seed : 424242;
  double dt = opt.dt > 0 ? opt.dt : 1e-3;
  double horizon = opt.horizon > 0 ? opt.horizon : 20.0;
  double residual_tol = opt.tol > 0 ? opt.tol : 1e-9;
  if (horizon < 6.0 || dt > 0.25)
    throw std::invalid_argument(
        "s4_continuous_doob needs horizon >= 6 and dt <= 0.25");
  const long n_inner = kInnerDefault;
  const long steps = static_cast<long>(std::llround(horizon / dt));
  const double sq_dt = std::sqrt(dt);

  ScenarioResult res;
  res.ensemble.scenario = "s4_continuous_doob";
  res.ensemble.master_seed = seed;
  res.ensemble.dt = dt;
  res.ensemble.horizon = horizon;
  res.ensemble.bundles.resize(static_cast<std::size_t>(n));

  std::vector<OuterPath> outs(static_cast<std::size_t>(n));
  std::vector<double> ref_x;  // full log path of bundle 0

  parallel_for_paths(static_cast<std::size_t>(n), opt.threads,
                     [&](std::size_t i) {
    RngStream rng(seed, i, 0);
    OuterPath& o = outs[i];
    BridgeWalk<2> bw;
    bw.levels = {std::log(2.0), std::log(4.0)};
    bw.x = 0.0;
    double star = 0.0;
    std::size_t cp = 0;
    std::vector<double>* full = i == 0 ? &ref_x : nullptr;
    if (full) {
      full->reserve(static_cast<std::size_t>(steps) + 1);
      full->push_back(0.0);
    }
    for (long k = 1; k <= steps; ++k) {
      double xn = bw.x - 0.5 * dt + sq_dt * rng.normal();
      double u = rng.uniform();
      bw.step(xn, dt, u);
      star = std::max(star, bw.x);
      if (full) full->push_back(bw.x);
      while (cp < kCpTimes.size() &&
             k >= std::llround(kCpTimes[cp] / dt)) {
        o.x_cp[cp] = bw.x;
        o.star_cp[cp] = star;
        ++cp;
      }
    }
    o.x_final = bw.x;
    o.hit = {bw.hit[0], bw.hit[1]};

    PathBundle pb;
    PathBuilder mu(1.0, horizon, TailMode::Truncated);
    PathBuilder mm(1.0, horizon, TailMode::Truncated);  // U/U* + log U* at 0
    for (std::size_t c = 0; c < kCpTimes.size(); ++c) {
      mu.append(kCpTimes[c], std::exp(o.x_cp[c]), EventKind::Grid);
      mm.append(kCpTimes[c],
                std::exp(o.x_cp[c] - o.star_cp[c]) + o.star_cp[c],
                EventKind::Grid);
    }
    pb.paths.emplace("mart_U", std::move(mu).build());
    pb.paths.emplace("mart_M", std::move(mm).build());
    pb.scalars["U_final"] = std::exp(o.x_final);
    res.ensemble.bundles[i] = std::move(pb);
  });

  RunReport& r = res.report;
  r.scenario = res.ensemble.scenario;
  r.seed = seed;
  r.n_paths = n;
  r.dt = dt;
  r.horizon = horizon;
  auto push = [&r](const std::string& name, double est, double se, double tol,
                   bool pass) {
    r.checks.push_back({name, est, se, tol, pass});
  };

  auto mart_row = [&](const std::string& name, const std::string& proc) {
    MartingaleTestReport m =
        empirical_martingale_test(res.ensemble, proc, kCpTimes);
    double worst = 0.0;
    for (const MartingaleCheck& c : m.checks)
      if (c.se > 0.0) worst = std::max(worst, std::abs(c.estimate) / c.se);
    push(name, worst, 1.0, m.k, m.all_pass);
  };
  mart_row("martingale_U", "mart_U");
  mart_row("martingale_Z_plus_A", "mart_M");

  // Reference path: certificate and round trip at full resolution.
  {
    PathBuilder ub(1.0, horizon, TailMode::Truncated);
    for (long k = 1; k <= steps; ++k)
      ub.append(static_cast<double>(k) * dt,
                std::exp(ref_x[static_cast<std::size_t>(k)]),
                EventKind::Grid);
    CadlagPath uref = std::move(ub).build();
    CadlagPath ustar = running_max(uref);
    double rho = 0.0;
    {
      double m = uref.initial_value();
      for (const PathEvent& e : uref.events())
        if (e.value > m) {
          m = e.value;
          rho = e.time;
        }
    }
    PathBuilder zb(1.0, horizon, TailMode::Truncated);
    PathBuilder ab(0.0, horizon, TailMode::Truncated);
    for (const PathEvent& e : uref.events()) {
      zb.append_if_changed(e.time, e.value / ustar.value_at(e.time), e.kind);
      ab.append_if_changed(e.time, std::log(ustar.value_at(e.time)),
                           EventKind::Grid);
    }
    CadlagPath zref = std::move(zb).build();
    CadlagPath aref = std::move(ab).build();

    VerifyOptions vo;
    vo.u_star = &ustar;
    vo.a = &aref;
    vo.rho = rho;
    vo.residual_tol = residual_tol;
    vo.support_tol = residual_tol;
    vo.bracket_tol = residual_tol;
    MmrCertificate cert = verify_mmr_path(zref, uref, vo);
    cert.scenario = r.scenario;
    cert.path_id = 0;
    push("reference_certificate_on_horizon", cert.max_residual, 0.0,
         residual_tol, cert.verdict == Verdict::ValidOnHorizon);
    res.certificates.push_back(std::move(cert));

    MmrSolution redo = sde_solve_mmr(zref, extract_gamma(uref, ustar));
    double max_rel = 0.0;
    for (const PathEvent& e : uref.events()) {
      double b = redo.u.value_at(e.time);
      double scale = std::max({std::abs(e.value), std::abs(b), 1e-300});
      max_rel = std::max(max_rel, std::abs(e.value - b) / scale);
    }
    push("reference_roundtrip_rel_err", max_rel, 0.0, 1e-12,
         max_rel <= 1e-12);

    res.ensemble.bundles[0].paths.emplace("U_ref", std::move(uref));
    res.ensemble.bundles[0].paths.emplace("Ustar_ref", std::move(ustar));
    res.ensemble.bundles[0].paths.emplace("Z_ref", std::move(zref));
  }

  // Nested maximal-identity checks from the reference states.
  const OuterPath& ref = outs[0];
  for (std::size_t c = 0; c < kCpTimes.size(); ++c) {
    double t0 = kCpTimes[c];
    double x0 = ref.x_cp[c];
    std::array<double, 4> levels = {ref.star_cp[c], x0 + std::log(2.0),
                                    x0 + std::log(4.0), x0 + std::log(8.0)};
    long inner_steps = steps - std::llround(t0 / dt);

    std::vector<InnerOut> sims(static_cast<std::size_t>(n_inner));
    parallel_for_paths(static_cast<std::size_t>(n_inner), opt.threads,
                       [&](std::size_t s) {
      RngStream rng(seed, 1000000 + c * 10000 + s, 11);
      BridgeWalk<4> bw;
      bw.levels = levels;
      bw.x = x0;
      long k = 0;
      for (; k < inner_steps && !bw.all_hit(); ++k) {
        double xn = bw.x - 0.5 * dt + sq_dt * rng.normal();
        double u = rng.uniform();
        bw.step(xn, dt, u);
      }
      InnerOut io;
      io.x_final = bw.x;  // only read when some barrier was never hit
      for (std::size_t j = 0; j < 4; ++j)
        if (bw.hit[j]) io.hit_mask |= static_cast<std::uint8_t>(1u << j);
      sims[s] = io;
    });

    for (std::size_t j = 0; j < 4; ++j) {
      BarrierTally bt;
      KahanSum defc;
      for (const InnerOut& io : sims) {
        if (io.hit_mask & (1u << j))
          ++bt.hits;
        else
          defc.add(std::exp(io.x_final - levels[j]));
      }
      double nn = static_cast<double>(n_inner);
      bt.p_hat = static_cast<double>(bt.hits) / nn;
      bt.se = std::sqrt(bt.p_hat * (1.0 - bt.p_hat) / nn);
      bt.deficit = defc.value() / nn;
      double target = std::exp(x0 - levels[j]);
      double tol = std::max(3.0 * bt.se, bt.deficit + 0.005);
      std::string name = "doob_cp" + std::to_string(c + 1) + "_" +
                         kThrNames[j];
      push(name, bt.p_hat - target, bt.se, tol,
           std::abs(bt.p_hat - target) <= tol);
    }
  }

  // Unconditional maximal law from time 0 across the whole ensemble.
  for (std::size_t j = 0; j < 2; ++j) {
    double lam = j == 0 ? 2.0 : 4.0;
    long hits = 0;
    KahanSum defc;
    for (long i = 0; i < n; ++i) {
      const OuterPath& o = outs[static_cast<std::size_t>(i)];
      if (o.hit[j])
        ++hits;
      else
        defc.add(std::exp(o.x_final) / lam);
    }
    double nn = static_cast<double>(n);
    double p_hat = static_cast<double>(hits) / nn;
    double se = std::sqrt(p_hat * (1.0 - p_hat) / nn);
    double deficit = defc.value() / nn;
    double tol = std::max(3.0 * se, deficit + 0.005);
    std::string name = "doob_from_origin_x" +
                       std::to_string(static_cast<int>(lam));
    push(name, p_hat - 1.0 / lam, se, tol,
         std::abs(p_hat - 1.0 / lam) <= tol);
  }

  res.ok = res.report.all_pass();
  return res;
}

}  // namespace maxrep::detail
