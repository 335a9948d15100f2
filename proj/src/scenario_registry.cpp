#include <stdexcept>

#include "maxrep/finite.hpp"
#include "scenario_detail.hpp"

namespace maxrep {

namespace detail {

// The exact rational battery over small trees, folded into the common
// report shape. Counters arrive as estimates; a row passes when the
// count equals its required value. Under fault injection the suite is
// expected to catch the corruption, so success means a failed battery
// whose witness names the planted fault.
ScenarioResult run_finite(const RunOptions& opt) {
  FiniteSuiteConfig cfg;
  cfg.max_periods = opt.max_periods;
  cfg.max_branching = opt.max_branching;
  cfg.seed = opt.seed ? opt.seed : 1;
  cfg.inject_fault = opt.inject_fault;

  FiniteSuiteReport rep = run_finite_suite(cfg);

  ScenarioResult res;
  RunReport& r = res.report;
  r.scenario = "finite-suite";
  r.seed = cfg.seed;
  r.n_paths = rep.cases;
  r.dt = 0.0;
  r.horizon = static_cast<double>(cfg.max_periods);
  auto push = [&r](const std::string& name, double est, double tol,
                   bool pass) {
    r.checks.push_back({name, est, 0.0, tol, pass});
  };

  double cases = static_cast<double>(rep.cases);
  push("cases_run", cases, 0.0, rep.cases > 0);
  if (cfg.inject_fault) {
    bool caught = !rep.ok();
    bool named = false;
    for (const std::string& w : rep.witnesses)
      if (w.find("[fault]") != std::string::npos) named = true;
    push("fault_detected", caught && named ? 1.0 : 0.0, 0.0, caught && named);
    res.ok = caught && named;
    return res;
  }

  push("identity_failures", static_cast<double>(rep.identity_failures), 0.0,
       rep.identity_failures == 0);
  push("search_infeasible_everywhere",
       static_cast<double>(rep.infeasible_count), 0.0,
       rep.infeasible_count == rep.cases && rep.feasible_count == 0);
  push("honest_blind_mismatches", static_cast<double>(rep.honest_mismatches),
       0.0, rep.honest_mismatches == 0);
  push("honest_cases_seen", static_cast<double>(rep.honest_count), 0.0,
       rep.honest_count > 0);
  push("strong_projection_inclusion_violations",
       static_cast<double>(rep.variant2_violations), 0.0,
       rep.variant2_violations == 0);
  push("relative_pairs_checked",
       static_cast<double>(rep.relative_pairs_checked), 0.0,
       rep.relative_pairs_checked > 0);
  long nonhonest = rep.cases - rep.honest_count;
  push("relative_refutes_non_honest",
       static_cast<double>(rep.relative_refuted), 0.0,
       rep.relative_refuted == nonhonest && rep.relative_unrefuted == 0);
  res.ok = r.all_pass() && rep.ok();
  return res;
}

}  // namespace detail

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{
      "s1_first_jump",       "s2_nonunique",    "s3_counterexample",
      "s4_continuous_doob",  "s5_deterministic",
      "s6_jump_removal",     "s7_interpolation", "finite-suite"};
  return ids;
}

bool is_event_driven(const std::string& id) {
  return id == "s1_first_jump" || id == "s2_nonunique" ||
         id == "s5_deterministic" || id == "s6_jump_removal" ||
         id == "s7_interpolation" || id == "finite-suite";
}

ScenarioResult run_scenario(const std::string& id, const RunOptions& opt) {
  if (id == "s1_first_jump") return detail::run_s1(opt);
  if (id == "s2_nonunique") return detail::run_s2(opt);
  if (id == "s3_counterexample") return detail::run_s3(opt);
  if (id == "s4_continuous_doob") return detail::run_s4(opt);
  if (id == "s5_deterministic") return detail::run_s5(opt);
  if (id == "s6_jump_removal") return detail::run_s6(opt);
  if (id == "s7_interpolation") return detail::run_s7(opt);
  if (id == "finite-suite") return detail::run_finite(opt);
  throw std::invalid_argument("unknown scenario id: " + id);
}

}  // namespace maxrep
