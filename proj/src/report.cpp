#include "maxrep/report.hpp"

#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>

namespace maxrep {

namespace {
using json = nlohmann::json;

json certificate_to_json(const MmrCertificate& c) {
  json checks = json::object();
  for (const CheckOutcome& o : c.checks)
    checks[o.name] = {{"pass", o.pass}, {"value", o.value}};
  return json{{"scenario", c.scenario},
              {"path_id", c.path_id},
              {"residual", c.max_residual},
              {"checks", checks},
              {"verdict", to_string(c.verdict)}};
}
}  // namespace

bool RunReport::all_pass() const {
  for (const CheckRow& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string report_json(const RunReport& r) {
  json rows = json::array();
  for (const CheckRow& c : r.checks)
    rows.push_back({{"name", c.name},
                    {"estimate", c.estimate},
                    {"se", c.se},
                    {"tol", c.tol},
                    {"pass", c.pass}});
  json j{{"scenario", r.scenario},
         {"seed", r.seed},
         {"n_paths", r.n_paths},
         {"grid", {{"dt", r.dt}, {"horizon", r.horizon}}},
         {"checks", rows}};
  return j.dump(2);
}

std::string certificate_json(const MmrCertificate& c) {
  return certificate_to_json(c).dump(2);
}

std::string certificates_json(const std::vector<MmrCertificate>& cs) {
  json arr = json::array();
  for (const MmrCertificate& c : cs) arr.push_back(certificate_to_json(c));
  return arr.dump(2);
}

void print_report(std::ostream& os, const RunReport& r) {
  os << r.scenario << "  seed=" << r.seed << "  paths=" << r.n_paths << "\n";
  for (const CheckRow& c : r.checks) {
    os << "  " << (c.pass ? "[pass]" : "[FAIL]") << " " << std::left
       << std::setw(34) << c.name << std::right << " estimate="
       << std::setprecision(6) << c.estimate;
    if (c.se > 0.0) os << "  se=" << c.se;
    os << "  tol=" << c.tol << "\n";
  }
}

}  // namespace maxrep
