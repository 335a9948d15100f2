#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "maxrep/calculus.hpp"
#include "maxrep/path.hpp"
#include "maxrep/represent.hpp"
#include "maxrep/rng.hpp"

using namespace maxrep;

namespace {

constexpr double kStep = 0.0625;
constexpr double kInf = std::numeric_limits<double>::infinity();

// survival indicator that dies at S
CadlagPath kill_indicator(double S, double horizon) {
  PathBuilder b(1.0, horizon, TailMode::Absorbed);
  b.append(S, 0.0, EventKind::Jump);
  return std::move(b).build();
}

// ramp t up to `upto`, frozen afterwards, on the dyadic grid
CadlagPath dyadic_ramp(double upto, double horizon) {
  PathBuilder b(0.0, horizon, TailMode::Truncated);
  for (int k = 1; k * kStep <= upto; ++k)
    b.append(k * kStep, k * kStep, EventKind::Grid);
  return std::move(b).build();
}

}  // namespace

TEST_CASE("solver leaves a constant ratio alone") {
  CadlagPath z(1.0, 2.0, TailMode::Truncated, {});
  CadlagPath gamma(0.0, 2.0, TailMode::Truncated, {});
  MmrSolution sol = sde_solve_mmr(z, gamma);
  CHECK(sol.u.events().empty());
  CHECK(sol.u.final_value() == 1.0);
  CHECK(sol.u_star.final_value() == 1.0);
}

TEST_CASE("solver reproduces the killed exponential bitwise") {
  const double S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  CadlagPath gamma = dyadic_ramp(S, H);
  MmrSolution sol = sde_solve_mmr(z, gamma);

  for (int k = 1; k * kStep < S; ++k) {
    double t = k * kStep;
    CHECK(sol.u.value_at(t) == std::exp(t));
    CHECK(sol.u_star.value_at(t) == std::exp(t));
  }
  // grid flow and the kill share the time S: one event, jump applied last
  CHECK(sol.u.value_at(S) == 0.0);
  CHECK(sol.u.final_value() == 0.0);
  CHECK(sol.u.tail() == TailMode::Absorbed);
  CHECK(sol.u_star.value_at(S) == std::exp(S));
  CHECK(sol.u_star.final_value() == std::exp(S));

  // certificate on the pair is fully clean
  VerifyOptions opt;
  opt.u_star = &sol.u_star;
  MmrCertificate cert = verify_mmr_path(z, sol.u, opt);
  CHECK(cert.verdict == Verdict::Valid);
  CHECK(cert.max_residual == 0.0);
  for (const auto& c : cert.checks) CHECK(c.pass);
}

TEST_CASE("solver validates its inputs") {
  CadlagPath z = kill_indicator(0.75, 1.5);
  CadlagPath gamma = dyadic_ramp(0.75, 1.5);
  CadlagPath short_gamma(0.0, 1.0, TailMode::Truncated, {});
  CHECK_THROWS_AS(sde_solve_mmr(z, short_gamma), std::invalid_argument);

  PathBuilder zb(0.5, 1.5, TailMode::Truncated);
  CadlagPath z_bad_start = std::move(zb).build();
  CHECK_THROWS_AS(sde_solve_mmr(z_bad_start, gamma), std::invalid_argument);

  PathBuilder zn(1.0, 1.5, TailMode::Truncated);
  zn.append(0.5, -0.25, EventKind::Jump);
  CadlagPath z_neg = std::move(zn).build();
  CHECK_THROWS_AS(sde_solve_mmr(z_neg, gamma), std::invalid_argument);

  PathBuilder gb(0.0, 1.5, TailMode::Truncated);
  gb.append(0.25, 0.5, EventKind::Grid);
  gb.append(0.5, 0.25, EventKind::Grid);
  CadlagPath g_dec = std::move(gb).build();
  CHECK_THROWS_AS(sde_solve_mmr(z, g_dec), std::invalid_argument);

  // a ratio rising above the max would force U through zero from below
  PathBuilder zr(1.0, 1.5, TailMode::Truncated);
  zr.append(0.25, 0.25, EventKind::Jump);
  zr.append(0.5, 1.5, EventKind::Jump);
  CadlagPath z_rise = std::move(zr).build();
  CHECK_NOTHROW(sde_solve_mmr(z_rise, dyadic_ramp(0.0, 1.5)));
  PathBuilder zd(1.0, 1.5, TailMode::Truncated);
  zd.append(0.25, -0.0, EventKind::Jump);
  CadlagPath z_zero = std::move(zd).build();
  CHECK_NOTHROW(sde_solve_mmr(z_zero, dyadic_ramp(0.0, 1.5)));
}

TEST_CASE("solver output is deterministic on tied times") {
  const double S = 0.75, H = 1.5;
  PathBuilder gb(0.0, H, TailMode::Truncated);
  gb.append(0.25, 1.0, EventKind::Jump);
  for (int k = 5; k * kStep <= S; ++k)
    gb.append(k * kStep, 1.0 + (k * kStep - 0.25), EventKind::Grid);
  CadlagPath gamma2 = std::move(gb).build();
  CadlagPath z = kill_indicator(S, H);

  MmrSolution a = sde_solve_mmr(z, gamma2);
  MmrSolution b = sde_solve_mmr(z, gamma2);
  CHECK(a.u.same_events(b.u));
  CHECK(a.u_star.same_events(b.u_star));

  // doubled maximum after the compensator jump
  CHECK(a.u.value_at(0.25) == 2.0);
  for (int k = 5; k * kStep < S; ++k) {
    double t = k * kStep;
    CHECK(a.u.value_at(t) == 2.0 * std::exp(t - 0.25));
  }
  CHECK(a.u.value_at(S) == 0.0);
  CHECK(a.u_star.final_value() == 2.0 * std::exp(S - 0.25));
}

TEST_CASE("gamma extraction inverts the solver") {
  const double S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  CadlagPath gamma = dyadic_ramp(S, H);
  MmrSolution sol = sde_solve_mmr(z, gamma);

  CadlagPath got = extract_gamma(sol.u, sol.u_star);
  for (const auto& e : got.events())
    CHECK(e.value == doctest::Approx(std::min(e.time, S)).epsilon(1e-13));

  // the one-argument form recovers the max from U alone; the final grid
  // rise shares its emission slot with the kill, so U never shows exp(S)
  // and that last mass is invisible without the true running max
  CadlagPath got2 = extract_gamma(sol.u);
  REQUIRE(got2.events().size() + 1 == got.events().size());
  for (std::size_t i = 0; i < got2.events().size(); ++i) {
    CHECK(got2.events()[i].time == got.events()[i].time);
    CHECK(got2.events()[i].value == got.events()[i].value);
    CHECK(got2.events()[i].kind == got.events()[i].kind);
  }

  // rebuilt pair matches the original within accumulation error
  MmrSolution sol2 = sde_solve_mmr(z, got);
  REQUIRE(sol2.u.events().size() == sol.u.events().size());
  for (std::size_t i = 0; i < sol.u.events().size(); ++i) {
    double a = sol.u.events()[i].value;
    double b = sol2.u.events()[i].value;
    CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("gamma extraction round trips random jump paths") {
  for (int rep = 0; rep < 50; ++rep) {
    RngStream rng(424242, static_cast<std::uint64_t>(rep), 23);
    PathBuilder ub(1.0, 2.0, TailMode::Truncated);
    double cur = 1.0;
    double t = 0.0;
    for (int k = 0; k < 20; ++k) {
      t += (1.0 + static_cast<double>(rng.below(8))) / 64.0;
      if (t >= 2.0) break;
      double next =
          (1.0 + static_cast<double>(rng.below(96))) / 32.0;  // in [1/32, 3]
      if (next != cur) ub.append(t, next, EventKind::Jump);
      cur = next;
    }
    CadlagPath u = std::move(ub).build();
    RatioDecomposition rd = ratio_decomposition(u);
    CadlagPath gamma = extract_gamma(u);
    MmrSolution sol = sde_solve_mmr(rd.z, gamma);
    for (const auto& e : u.events()) {
      double want = e.value;
      double got = sol.u.value_at(e.time);
      CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
    }
  }
}

TEST_CASE("jump removal recovers the plain exponential") {
  const double Sp = 0.25, S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  PathBuilder gb(0.0, H, TailMode::Truncated);
  gb.append(Sp, 1.0, EventKind::Jump);
  for (int k = 5; k * kStep <= S; ++k)
    gb.append(k * kStep, 1.0 + (k * kStep - Sp), EventKind::Grid);
  CadlagPath gamma2 = std::move(gb).build();
  MmrSolution with_jump = sde_solve_mmr(z, gamma2);

  MmrSolution plain = sde_solve_mmr(z, dyadic_ramp(S, H));

  CadlagPath v = dyadic_ramp(Sp, H);
  CadlagPath stripped = remove_ti_jump(with_jump.u, Sp, v);

  for (int k = 1; k <= static_cast<int>(H / kStep); ++k) {
    double t = k * kStep;
    double want = plain.u.value_at(t);
    double got = stripped.value_at(t);
    CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
  }
  CHECK(stripped.value_at(S) == 0.0);
  CHECK(stripped.final_value() == 0.0);
}

TEST_CASE("jump removal with an infinite time is a plain tilt") {
  const double S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  MmrSolution sol = sde_solve_mmr(z, dyadic_ramp(S, H));
  CadlagPath v = dyadic_ramp(0.25, H);
  CadlagPath tilted = remove_ti_jump(sol.u, kInf, v);
  for (const auto& e : tilted.events()) {
    double want = sol.u.value_at(e.time) * std::exp(v.value_at(e.time));
    CHECK(e.value == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("jump removal rejects bad inputs") {
  const double S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  MmrSolution sol = sde_solve_mmr(z, dyadic_ramp(S, H));
  CadlagPath v = dyadic_ramp(0.25, H);

  // no jump sits at 0.3, and the kill at S is a negative jump
  CHECK_THROWS_AS(remove_ti_jump(sol.u, 0.3, v), std::domain_error);
  CHECK_THROWS_AS(remove_ti_jump(sol.u, S, v), std::domain_error);

  PathBuilder vb(0.0, H, TailMode::Truncated);
  vb.append(0.25, 0.25, EventKind::Jump);
  CadlagPath v_jumpy = std::move(vb).build();
  CHECK_THROWS_AS(remove_ti_jump(sol.u, kInf, v_jumpy), std::domain_error);
}

TEST_CASE("compensator swap keeps the identity case intact") {
  PathBuilder gb(0.0, 1.0, TailMode::Truncated);
  gb.append(0.5, 1.0, EventKind::Jump);
  CadlagPath gamma = std::move(gb).build();
  CadlagPath v = [&] {
    PathBuilder b(0.0, 1.0, TailMode::Truncated);
    for (int k = 1; k * kStep <= 0.5; ++k)
      b.append(k * kStep, k * kStep, EventKind::Grid);
    return std::move(b).build();
  }();
  CadlagPath same = compensator_swap_ti(gamma, 0.5, 1.0, v, v);
  CHECK(same.same_events(gamma));
}

TEST_CASE("compensator swap splits a jump into flow plus a smaller jump") {
  PathBuilder gb(0.0, 1.0, TailMode::Truncated);
  gb.append(0.5, 1.0, EventKind::Jump);
  CadlagPath gamma = std::move(gb).build();
  CadlagPath v = [&] {
    PathBuilder b(0.0, 1.0, TailMode::Truncated);
    for (int k = 1; k * kStep <= 0.5; ++k)
      b.append(k * kStep, k * kStep, EventKind::Grid);
    return std::move(b).build();
  }();
  CadlagPath vh = [&] {
    PathBuilder b(0.0, 1.0, TailMode::Truncated);
    for (int k = 1; k * kStep <= 0.5; ++k)
      b.append(k * kStep, k * kStep / 2.0, EventKind::Grid);
    return std::move(b).build();
  }();

  CadlagPath hat = compensator_swap_ti(gamma, 0.5, 0.5, v, vh);
  CHECK(hat.value_at(0.25) == 0.125);
  CHECK(hat.value_at(0.4375) == 0.21875);
  CHECK(hat.value_at(0.5) == 0.75);
  CHECK(hat.final_value() == 0.75);

  // the last flow step shares its time with the reduced jump, so the merged
  // event carries flow 1/32 plus jump 1/2
  REQUIRE(hat.event_at(0.5) != nullptr);
  CHECK(hat.event_at(0.5)->kind == EventKind::Jump);
  CHECK(hat.left_limit_at(0.5) == 0.21875);
  CHECK(hat.jump_at(0.5) == 0.53125);

  // exact increment audit: nondecreasing everywhere
  double prev = hat.initial_value();
  for (const auto& e : hat.events()) {
    CHECK(e.value >= prev);
    prev = e.value;
  }
}

TEST_CASE("compensator swap rejects bad weights and reports the bad time") {
  PathBuilder gb(0.0, 1.0, TailMode::Truncated);
  gb.append(0.5, 1.0, EventKind::Jump);
  CadlagPath gamma = std::move(gb).build();
  CadlagPath v = [&] {
    PathBuilder b(0.0, 1.0, TailMode::Truncated);
    for (int k = 1; k * kStep <= 0.5; ++k)
      b.append(k * kStep, k * kStep, EventKind::Grid);
    return std::move(b).build();
  }();

  CHECK_THROWS_AS(compensator_swap_ti(gamma, 0.5, 1.5, v, v),
                  std::domain_error);
  CHECK_THROWS_AS(compensator_swap_ti(gamma, 0.5, -0.1, v, v),
                  std::domain_error);
  CHECK_THROWS_AS(compensator_swap_ti(gamma, 0.25, 0.5, v, v),
                  std::domain_error);

  PathBuilder vj(0.0, 1.0, TailMode::Truncated);
  vj.append(0.25, 0.25, EventKind::Jump);
  CadlagPath v_jumpy = std::move(vj).build();
  CHECK_THROWS_AS(compensator_swap_ti(gamma, 0.5, 0.5, v_jumpy, v),
                  std::domain_error);

  // doubled replacement flow drags the result below its start
  CadlagPath v2 = [&] {
    PathBuilder b(0.0, 1.0, TailMode::Truncated);
    for (int k = 1; k * kStep <= 0.5; ++k)
      b.append(k * kStep, 2.0 * k * kStep, EventKind::Grid);
    return std::move(b).build();
  }();
  try {
    compensator_swap_ti(gamma, 0.5, 0.5, v, v2);
    CHECK(false);
  } catch (const std::domain_error& err) {
    CHECK(std::string(err.what()).find("0.0625") != std::string::npos);
  }
}

TEST_CASE("certificate refutes a mismatched ratio") {
  const double H = 1.5;
  CadlagPath z = kill_indicator(0.5, H);
  MmrSolution late = sde_solve_mmr(kill_indicator(0.75, H), dyadic_ramp(0.75, H));

  // candidate dies a quarter later than the ratio it claims to represent
  MmrCertificate cert = verify_mmr_path(z, late.u);
  CHECK(cert.verdict == Verdict::Refuted);
  CHECK(cert.reason == "ratio_residual");
  CHECK(cert.max_residual == 1.0);
  REQUIRE(!cert.checks.empty());
  CHECK(cert.checks[0].name == "ratio_residual");
  CHECK(!cert.checks[0].pass);
}

TEST_CASE("pathwise certificate cannot see a distribution defect") {
  // doubling the compensator changes the law of U but not the pathwise
  // ratio: U rides its max while the ratio is 1 and dies with it, so the
  // certificate stays clean; only ensemble martingale tests catch this
  const double S = 0.75, H = 1.5;
  CadlagPath z = kill_indicator(S, H);
  CadlagPath doubled = [&] {
    PathBuilder b(0.0, H, TailMode::Truncated);
    for (int k = 1; k * kStep <= S; ++k)
      b.append(k * kStep, 2.0 * k * kStep, EventKind::Grid);
    return std::move(b).build();
  }();
  MmrSolution wrong = sde_solve_mmr(z, doubled);
  CHECK(wrong.u.value_at(0.5) == std::exp(1.0));

  MmrCertificate cert = verify_mmr_path(z, wrong.u);
  CHECK(cert.verdict == Verdict::Valid);
  CHECK(cert.max_residual == 0.0);
}

TEST_CASE("certificate check ladder isolates each failure") {
  const double H = 1.0;

  // support: hairline ratio dip below 1 while the max keeps rising; the dip
  // spans the full grid step ending 0.375, so that mass escapes {Z = 1}
  {
    PathBuilder zb(1.0, H, TailMode::Truncated);
    zb.append(0.25, 1.0 - 5e-13, EventKind::Grid);
    zb.append(0.5, 1.0, EventKind::Grid);
    CadlagPath z = std::move(zb).build();
    PathBuilder ub(1.0, H, TailMode::Truncated);
    for (int k = 1; k <= 8; ++k)
      ub.append(k * 0.125, std::exp(k * 0.125), EventKind::Grid);
    CadlagPath u = std::move(ub).build();
    MmrCertificate cert = verify_mmr_path(z, u);
    CHECK(cert.verdict == Verdict::Refuted);
    CHECK(cert.reason == "dustar_support");
    CHECK(cert.checks[0].name == "ratio_residual");
    CHECK(cert.checks[0].pass);
  }

  // shared jump site with the ratio already at 1 is rejected
  {
    PathBuilder ub(1.0, H, TailMode::Truncated);
    ub.append(0.5, 1.5, EventKind::Jump);
    CadlagPath u = std::move(ub).build();
    PathBuilder zb(1.0, H, TailMode::Truncated);
    zb.append(0.5, 1.0, EventKind::Jump);
    CadlagPath z = std::move(zb).build();
    MmrCertificate cert = verify_mmr_path(z, u);
    CHECK(cert.verdict == Verdict::Refuted);
    CHECK(cert.reason == "z_ustar_jump_sites");
  }

  // the same jump is fine when the ratio rises back to 1 from below
  {
    PathBuilder ub(1.0, H, TailMode::Truncated);
    ub.append(0.3, 0.875, EventKind::Grid);
    ub.append(0.5, 1.25, EventKind::Jump);
    CadlagPath u = std::move(ub).build();
    PathBuilder zb(1.0, H, TailMode::Truncated);
    zb.append(0.3, 0.875, EventKind::Grid);
    zb.append(0.5, 1.0, EventKind::Jump);
    CadlagPath z = std::move(zb).build();
    MmrCertificate cert = verify_mmr_path(z, u);
    CHECK(cert.verdict == Verdict::ValidOnHorizon);

    // a colocated compensator jump trips the bracket check
    PathBuilder ab(0.0, H, TailMode::Truncated);
    ab.append(0.5, 0.1, EventKind::Jump);
    CadlagPath a = std::move(ab).build();
    VerifyOptions opt;
    opt.a = &a;
    MmrCertificate cert2 = verify_mmr_path(z, u, opt);
    CHECK(cert2.verdict == Verdict::Refuted);
    CHECK(cert2.reason == "bracket_a_ustar");

    // a fresh maximum by jump exactly at the last-max time is refuted
    VerifyOptions opt3;
    opt3.rho = 0.5;
    MmrCertificate cert3 = verify_mmr_path(z, u, opt3);
    CHECK(cert3.verdict == Verdict::Refuted);
    CHECK(cert3.reason == "ustar_jump_at_rho");
  }
}
