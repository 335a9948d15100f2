"""Martingale maximal-ratio toolkit.

Paths are right-continuous step functions given by an initial value and a
list of (time, value, kind) events, kind being "grid" for sampled flow or
"jump" for an actual jump. The core operations solve the representation
SDE dU = U*_- d(Z + gamma), verify a claimed ratio pathwise, transform a
representation by removing a jump or swapping compensator mass, and run
the bundled scenario battery.
"""

import json as _json
from dataclasses import dataclass, field

try:
    from ._maxrep import (
        Path,
        compensator_swap_ti,
        extract_gamma,
        is_event_driven,
        ratio_decomposition,
        remove_ti_jump,
        run_scenario_json,
        running_max,
        scenario_ids,
        skorokhod_ok,
        skorokhod_solve,
        solve_mmr,
        verify_path_json,
    )
except ImportError:  # development layout: extension next to the package
    from _maxrep import (
        Path,
        compensator_swap_ti,
        extract_gamma,
        is_event_driven,
        ratio_decomposition,
        remove_ti_jump,
        run_scenario_json,
        running_max,
        scenario_ids,
        skorokhod_ok,
        skorokhod_solve,
        solve_mmr,
        verify_path_json,
    )

__all__ = [
    "Path",
    "ScenarioRun",
    "compensator_swap_ti",
    "extract_gamma",
    "is_event_driven",
    "ratio_decomposition",
    "remove_ti_jump",
    "run_scenario",
    "running_max",
    "scenario_ids",
    "skorokhod_ok",
    "skorokhod_solve",
    "solve_mmr",
    "verify_path",
]


def verify_path(z, u, **kwargs):
    """Certificate for the claim z = u / running_max(u), as a dict.

    Keyword arguments mirror the solver options: u_star, a, rho,
    residual_tol, support_tol, bracket_tol.
    """
    return _json.loads(verify_path_json(z, u, **kwargs))


@dataclass
class ScenarioRun:
    ok: bool
    report: dict
    certificates: list = field(default_factory=list)


def run_scenario(scenario_id, **kwargs):
    """Run one scenario (or "finite-suite") and parse its reports.

    Keyword arguments mirror the CLI flags: n_paths, seed, dt, horizon,
    tol, threads, max_periods, max_branching, inject_fault.
    """
    ok, report, certificates = run_scenario_json(scenario_id, **kwargs)
    return ScenarioRun(
        ok=ok,
        report=_json.loads(report),
        certificates=_json.loads(certificates) if certificates else [],
    )
