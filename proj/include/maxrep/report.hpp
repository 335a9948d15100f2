#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxrep/represent.hpp"

namespace maxrep {

// One verdict row of a scenario run: a named quantity, its estimate, the
// uncertainty attached to it (0 for exact checks), and the tolerance it
// was held against.
struct CheckRow {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  long n_paths = 0;
  double dt = 0.0;      // 0 when the scenario is event-driven
  double horizon = 0.0;
  std::vector<CheckRow> checks;

  bool all_pass() const;
};

std::string report_json(const RunReport& r);
std::string certificate_json(const MmrCertificate& c);
std::string certificates_json(const std::vector<MmrCertificate>& cs);

// One line per check, aligned for terminal reading.
void print_report(std::ostream& os, const RunReport& r);

}  // namespace maxrep
