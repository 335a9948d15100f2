// Python face of the toolkit: path construction, the representation
// solver and its certificate, the jump-removal and interpolation
// transforms, and the scenario registry. Reports cross the boundary as
// the same JSON the CLI writes, so both front ends share one format.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "maxrep/calculus.hpp"
#include "maxrep/path.hpp"
#include "maxrep/report.hpp"
#include "maxrep/represent.hpp"
#include "maxrep/scenarios.hpp"

namespace py = pybind11;
using namespace maxrep;

namespace {

EventKind kind_of(const std::string& s) {
  if (s == "grid") return EventKind::Grid;
  if (s == "jump") return EventKind::Jump;
  throw std::invalid_argument("event kind must be 'grid' or 'jump'");
}

std::string kind_str(EventKind k) {
  return k == EventKind::Jump ? "jump" : "grid";
}

TailMode tail_of(const std::string& s) {
  if (s == "truncated") return TailMode::Truncated;
  if (s == "absorbed") return TailMode::Absorbed;
  throw std::invalid_argument("tail must be 'truncated' or 'absorbed'");
}

std::string tail_str(TailMode t) {
  return t == TailMode::Absorbed ? "absorbed" : "truncated";
}

using EventTuple = std::tuple<double, double, std::string>;

CadlagPath make_path(double initial, double horizon, const std::string& tail,
                     const std::vector<EventTuple>& events) {
  PathBuilder b(initial, horizon, tail_of(tail));
  for (const EventTuple& e : events)
    b.append(std::get<0>(e), std::get<1>(e), kind_of(std::get<2>(e)));
  return std::move(b).build();
}

std::vector<EventTuple> event_list(const CadlagPath& p) {
  std::vector<EventTuple> out;
  out.reserve(p.size());
  for (const PathEvent& e : p.events())
    out.emplace_back(e.time, e.value, kind_str(e.kind));
  return out;
}

}  // namespace

PYBIND11_MODULE(_maxrep, m) {
  m.doc() = "martingale maximal-ratio toolkit";

  py::class_<CadlagPath>(m, "Path")
      .def(py::init(&make_path), py::arg("initial"), py::arg("horizon"),
           py::arg("tail") = "truncated",
           py::arg("events") = std::vector<EventTuple>{})
      .def_property_readonly("initial_value", &CadlagPath::initial_value)
      .def_property_readonly("horizon", &CadlagPath::horizon)
      .def_property_readonly("tail",
                             [](const CadlagPath& p) { return tail_str(p.tail()); })
      .def_property_readonly("events", &event_list)
      .def("value_at", &CadlagPath::value_at, py::arg("t"))
      .def("left_limit_at", &CadlagPath::left_limit_at, py::arg("t"))
      .def("jump_at", &CadlagPath::jump_at, py::arg("t"))
      .def("interp_value_at", &CadlagPath::interp_value_at, py::arg("t"))
      .def("final_value", &CadlagPath::final_value)
      .def("max_value", &CadlagPath::max_value)
      .def("same_events", &CadlagPath::same_events, py::arg("other"))
      .def("__len__", &CadlagPath::size)
      .def("__repr__", [](const CadlagPath& p) {
        return "Path(initial=" + std::to_string(p.initial_value()) +
               ", horizon=" + std::to_string(p.horizon()) + ", events=" +
               std::to_string(p.size()) + ", tail=" + tail_str(p.tail()) +
               ")";
      });

  m.def("running_max", &running_max, py::arg("x"));

  m.def(
      "skorokhod_solve", &skorokhod_solve, py::arg("x"),
      "minimal nondecreasing regulator keeping x + y nonnegative");
  m.def(
      "skorokhod_ok",
      [](const CadlagPath& x, const CadlagPath& y, double tol) {
        return verify_skorokhod(x, y, tol).ok();
      },
      py::arg("x"), py::arg("y"), py::arg("tol") = 0.0);

  m.def(
      "solve_mmr",
      [](const CadlagPath& z, const CadlagPath& gamma) {
        MmrSolution s = sde_solve_mmr(z, gamma);
        return py::make_tuple(s.u, s.u_star);
      },
      py::arg("z"), py::arg("gamma"),
      "integrate dU = U*_- d(Z + gamma); returns (u, u_star)");

  m.def(
      "ratio_decomposition",
      [](const CadlagPath& u) {
        RatioDecomposition rd = ratio_decomposition(u);
        return py::make_tuple(rd.z, rd.residual);
      },
      py::arg("u"), "returns (u / running max, reconstruction residual)");

  m.def(
      "extract_gamma",
      [](const CadlagPath& u, const CadlagPath* u_star) {
        return u_star ? extract_gamma(u, *u_star) : extract_gamma(u);
      },
      py::arg("u"), py::arg("u_star") = nullptr);

  m.def(
      "verify_path_json",
      [](const CadlagPath& z, const CadlagPath& u, const CadlagPath* u_star,
         const CadlagPath* a, double rho, double residual_tol,
         double support_tol, double bracket_tol) {
        VerifyOptions o;
        o.u_star = u_star;
        o.a = a;
        o.rho = rho;
        o.residual_tol = residual_tol;
        o.support_tol = support_tol;
        o.bracket_tol = bracket_tol;
        return certificate_json(verify_mmr_path(z, u, o));
      },
      py::arg("z"), py::arg("u"), py::arg("u_star") = nullptr,
      py::arg("a") = nullptr,
      py::arg("rho") = std::numeric_limits<double>::quiet_NaN(),
      py::arg("residual_tol") = 1e-12, py::arg("support_tol") = 1e-12,
      py::arg("bracket_tol") = 1e-12,
      "certificate for the claim z = u / running max, as JSON");

  m.def("remove_ti_jump", &remove_ti_jump, py::arg("u"), py::arg("t"),
        py::arg("v"),
        "divide out the jump at t and tilt by e^v; t = inf tilts only");

  m.def("compensator_swap_ti", &compensator_swap_ti, py::arg("gamma"),
        py::arg("t"), py::arg("xi"), py::arg("v"), py::arg("vprime"),
        "replace the atom of gamma at t by xi and swap flow v for vprime");

  m.def("scenario_ids", [] { return scenario_ids(); });
  m.def("is_event_driven", &is_event_driven, py::arg("id"));

  m.def(
      "run_scenario_json",
      [](const std::string& id, long n_paths, std::uint64_t seed, double dt,
         double horizon, double tol, int threads, int max_periods,
         int max_branching, bool inject_fault) {
        RunOptions o;
        o.n_paths = n_paths;
        o.seed = seed;
        o.dt = dt;
        o.horizon = horizon;
        o.tol = tol;
        o.threads = threads;
        o.max_periods = max_periods;
        o.max_branching = max_branching;
        o.inject_fault = inject_fault;
        ScenarioResult res = run_scenario(id, o);
        return py::make_tuple(res.ok, report_json(res.report),
                              certificates_json(res.certificates));
      },
      py::arg("id"), py::arg("n_paths") = -1, py::arg("seed") = 0,
      py::arg("dt") = -1.0, py::arg("horizon") = -1.0, py::arg("tol") = -1.0,
      py::arg("threads") = 1, py::arg("max_periods") = 4,
      py::arg("max_branching") = 2, py::arg("inject_fault") = false,
      "returns (ok, report_json, certificates_json)");
}
