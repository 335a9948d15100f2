#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxrep/mc.hpp"
#include "maxrep/report.hpp"
#include "maxrep/represent.hpp"

namespace maxrep {

// ---------------------------------------------------------------------
// Worked-case registry. Each scenario wires a generator to the checkers
// and knows its own expected outcome, so a run "succeeds" when the
// expectation is met: construction scenarios succeed by certifying,
// refutation scenarios succeed by refuting.

struct RunOptions {
  long n_paths = -1;        // -1 = scenario default
  std::uint64_t seed = 0;   // 0  = scenario default
  double dt = -1.0;         // diffusion grid; event-driven scenarios ignore it
  double horizon = -1.0;
  double tol = -1.0;        // residual tolerance override for certificates
  int threads = 1;
  // finite-suite knobs
  int max_periods = 4;
  int max_branching = 2;
  bool inject_fault = false;
};

struct ScenarioResult {
  RunReport report;
  std::vector<MmrCertificate> certificates;
  Ensemble ensemble;  // whatever the scenario keeps for dumping
  bool ok = false;    // every check row passed (expectations included)
};

const std::vector<std::string>& scenario_ids();
bool is_event_driven(const std::string& id);  // ignores --dt by design

// Runs one scenario or the finite suite (id "finite-suite").
// Throws std::invalid_argument for unknown ids or bad options.
ScenarioResult run_scenario(const std::string& id, const RunOptions& opt);

}  // namespace maxrep
