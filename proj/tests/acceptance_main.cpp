// Acceptance runner: eight release criteria, one verdict line each, exit 0
// only when every criterion holds. Budgets and tolerances are pinned here
// so a regression in either the numbers or the runtime fails loudly.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <string>

#include "maxrep/report.hpp"
#include "maxrep/scenarios.hpp"
#include "property_paths.hpp"

using namespace maxrep;

namespace {

constexpr double kRatioResidualTol = 1e-12;  // criterion 1
constexpr double kRoundTripRelTol = 1e-9;    // criterion 3
constexpr long kFiniteCaseCap = 10000;       // criterion 7

bool g_all = true;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const CheckRow* row(const RunReport& r, const std::string& name) {
  for (const CheckRow& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool row_pass(const RunReport& r, const std::string& name) {
  const CheckRow* c = row(r, name);
  return c != nullptr && c->pass;
}

double row_est(const RunReport& r, const std::string& name) {
  const CheckRow* c = row(r, name);
  return c != nullptr ? c->estimate : std::numeric_limits<double>::quiet_NaN();
}

void verdict(int idx, const char* name, bool pass, double secs, double budget,
             const std::string& detail) {
  bool ok = pass && secs < budget;
  g_all = g_all && ok;
  std::printf("[%s] %d. %-28s %s  (%.1fs / %.0fs)\n", ok ? "PASS" : "FAIL",
              idx, name, detail.c_str(), secs, budget);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

int main() {
  std::printf("acceptance: martingale maximal-ratio toolkit\n");

  {  // 1. first-jump family is exact at scale
    auto t0 = std::chrono::steady_clock::now();
    RunOptions o;
    o.n_paths = 10000;
    ScenarioResult res = run_scenario("s1_first_jump", o);
    double resid = row_est(res.report, "max_ratio_residual");
    double escaped = row_est(res.report, "dustar_escaped_mass");
    bool pass = res.ok && resid <= kRatioResidualTol && escaped == 0.0;
    verdict(1, "first_jump_exact", pass, seconds_since(t0), 30.0,
            fmt("max|Z-U/U*|=%.3g escaped=%.3g", resid, escaped));
  }

  {  // 2. non-unique pair: both certify, branch frequency, compensated drift
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult res = run_scenario("s2_nonunique", RunOptions{});
    bool pass = res.ok && row_pass(res.report, "certificates_valid") &&
                row_pass(res.report, "divergence_frequency") &&
                row_pass(res.report, "martingale_compensated_prime");
    verdict(2, "nonunique_pair", pass, seconds_since(t0), 60.0,
            fmt("P[U!=U2]=%.4f valid=%.4f",
                row_est(res.report, "divergence_frequency"),
                row_est(res.report, "certificates_valid")));
  }

  {  // 3. jump removal reproduces the reference construction per path
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult res = run_scenario("s6_jump_removal", RunOptions{});
    double rel = row_est(res.report, "uprime_max_rel_err");
    bool pass = res.ok && row_pass(res.report, "uprime_equals_reference") &&
                rel <= kRoundTripRelTol;
    verdict(3, "jump_removal_roundtrip", pass, seconds_since(t0), 60.0,
            fmt("max rel err=%.3g", rel));
  }

  {  // 4. compensator interpolation: endpoints exact, interior certified
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult res = run_scenario("s7_interpolation", RunOptions{});
    bool pass = res.ok &&
                row_pass(res.report, "swap_at_zero_recovers_gamma") &&
                row_pass(res.report, "swap_at_one_recovers_gamma_prime") &&
                row_pass(res.report, "interpolated_certificates_valid");
    verdict(4, "interpolation_family", pass, seconds_since(t0), 60.0,
            fmt("certificates valid=%.4f",
                row_est(res.report, "interpolated_certificates_valid")));
  }

  {  // 5. maximal identity on a continuous-max diffusion, nested estimates
    auto t0 = std::chrono::steady_clock::now();
    RunOptions o;
    o.n_paths = 2000;
    o.dt = 1e-3;
    ScenarioResult res = run_scenario("s4_continuous_doob", o);
    int doob_rows = 0, doob_ok = 0;
    for (const CheckRow& c : res.report.checks)
      if (c.name.rfind("doob_", 0) == 0) {
        ++doob_rows;
        if (c.pass) ++doob_ok;
      }
    bool pass = res.ok && doob_rows >= 20 && doob_ok == doob_rows;
    verdict(5, "doob_maximal_identity", pass, seconds_since(t0), 600.0,
            fmt("doob rows %.0f/%.0f within max(3SE, tail+0.005)",
                static_cast<double>(doob_ok),
                static_cast<double>(doob_rows)));
  }

  {  // 6. counter-example: ratio walk returns with probability in (0,1)
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult res = run_scenario("s3_counterexample", RunOptions{});
    bool pass = res.ok &&
                row_pass(res.report, "oracle_return_prob_interior") &&
                row_pass(res.report, "nested_return_prob_below_one") &&
                row_est(res.report, "shadow_components_isolated") == 1.0;
    verdict(6, "counterexample_evidence", pass, seconds_since(t0), 300.0,
            fmt("q_hat=%.4f nested=%.4f",
                row_est(res.report, "oracle_return_prob_interior"),
                row_est(res.report, "nested_return_prob_below_one")));
  }

  {  // 7. finite suite: exact rational identities, infeasibility everywhere
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult res = run_scenario("finite-suite", RunOptions{});
    double cases = row_est(res.report, "cases_run");
    bool pass = res.ok && cases > 0 && cases <= kFiniteCaseCap &&
                row_pass(res.report, "search_infeasible_everywhere") &&
                row_est(res.report, "identity_failures") == 0.0;
    verdict(7, "finite_suite_exact", pass, seconds_since(t0), 120.0,
            fmt("cases=%.0f identity failures=%.0f", cases,
                row_est(res.report, "identity_failures")));
  }

  {  // 8. pathwise property battery on random step paths
    auto t0 = std::chrono::steady_clock::now();
    proptest::PropertyOutcome out = proptest::run_property_paths(1000, 424242);
    verdict(8, "property_battery", out.all_ok(), seconds_since(t0), 60.0,
            fmt("reflection/forward/max-transform/parts ok on %.0f/%.0f",
                static_cast<double>(
                    std::min(std::min(out.skorokhod_ok, out.gexp_ok),
                             std::min(out.supmultip_ok, out.ibp_exact))),
                static_cast<double>(out.paths)));
  }

  std::printf("%s\n", g_all ? "ACCEPTANCE: all criteria met"
                            : "ACCEPTANCE: FAILED");
  return g_all ? 0 : 1;
}
