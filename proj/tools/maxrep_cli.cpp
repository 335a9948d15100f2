#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maxrep/path.hpp"
#include "maxrep/scenarios.hpp"

// Scenario runner. Exit code 0 means every check met its expectation
// (refutation scenarios succeed by refuting), 1 means some check failed,
// 2 means the configuration itself was rejected.

namespace {

int run(const std::string& id, const maxrep::RunOptions& opt,
        const std::string& out_path, const std::string& csv_prefix) {
  maxrep::ScenarioResult res = maxrep::run_scenario(id, opt);
  maxrep::print_report(std::cout, res.report);

  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    os << maxrep::report_json(res.report);
    if (!res.certificates.empty()) {
      std::ofstream cs(out_path + ".certificates.json");
      if (!cs) {
        std::cerr << "cannot write " << out_path << ".certificates.json\n";
        return 2;
      }
      cs << maxrep::certificates_json(res.certificates);
    }
  }

  if (!csv_prefix.empty()) {
    if (res.ensemble.bundles.empty()) {
      std::cerr << "nothing to dump: scenario kept no paths\n";
      return 2;
    }
    const maxrep::PathBundle& pb = res.ensemble.bundles.front();
    for (const auto& [name, path] : pb.paths) {
      std::ofstream os(csv_prefix + "." + name + ".csv");
      if (!os) {
        std::cerr << "cannot write " << csv_prefix << "." << name << ".csv\n";
        return 2;
      }
      maxrep::write_csv(os, path);
    }
  }

  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"martingale maximal-ratio scenario runner"};

  std::string scenario;
  std::string out_path;
  std::string csv_prefix;
  maxrep::RunOptions opt;

  std::string id_list;
  for (const std::string& s : maxrep::scenario_ids())
    id_list += (id_list.empty() ? "" : ", ") + s;

  app.add_option("--scenario", scenario, "one of: " + id_list)->required();
  app.add_option("--paths", opt.n_paths, "ensemble size (scenario default)");
  app.add_option("--seed", opt.seed, "master seed (scenario default)");
  app.add_option("--dt", opt.dt,
                 "grid step; event-driven scenarios ignore it by design");
  app.add_option("--horizon", opt.horizon, "time horizon");
  app.add_option("--tol", opt.tol, "certificate residual tolerance override");
  app.add_option("--out", out_path, "write report JSON here");
  app.add_option("--csv-dump", csv_prefix,
                 "dump bundle 0's paths to <prefix>.<name>.csv");
  app.add_option("--threads", opt.threads, "worker threads for path builds");
  app.add_option("--max-periods", opt.max_periods,
                 "finite-suite: tree depth cap (<= 5)");
  app.add_option("--max-branching", opt.max_branching,
                 "finite-suite: 2 = binary, 3 = adds ternary block");
  app.add_flag("--inject-fault", opt.inject_fault,
               "finite-suite: corrupt one projection; the run must catch it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    return run(scenario, opt, out_path, csv_prefix);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}
