"""Scenario files and run reports.

A scenario is a YAML mapping with a versioned ``schema: 1`` field:

    schema: 1
    graph: path/to/graph.txt      # optional; CLI --graph overrides
    protocol: adaptive            # or nominal
    alpha: 1.0                    # required for adaptive
    dt: 0.001                     # optional, default 0.001
    t_final: 20.0                 # optional, default 20 / lambda_2
    x0: [1.0, -1.0]
    x_hat0: [1.0, -1.0]           # optional, default x0
    w_hat0: [0.0, 0.0]            # optional, default zeros
    w: [1.0, 0.0]                 # optional, default zeros

RunReport is the machine-readable summary of a run; it is computed purely
from the sampled trajectory so that re-analyzing a stored CSV reproduces
the simulation-time report byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .dynamics import (
    ADAPTIVE,
    DEFAULT_DT,
    NOMINAL,
    SimConfig,
    Trajectory,
    consensus_error,
    default_t_final,
    error_series,
)
from .errors import ScenarioError
from .graph import Graph
from .stability import (
    centroid_analysis,
    check_energy_decay,
    check_perturbation_bound,
    fit_decay_rate,
    verify_theorem,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: config plus disturbance vector and graph path."""

    config: SimConfig
    w: np.ndarray
    graph_path: str | None = None
    x_hat0_overridden: bool = False


def _vector(raw, n: int, name: str) -> np.ndarray:
    if not isinstance(raw, (list, tuple)) or not all(
        isinstance(v, (int, float)) for v in raw
    ):
        raise ScenarioError(f"{name} must be a list of numbers")
    v = np.asarray(raw, dtype=float)
    if len(v) != n:
        raise ScenarioError(f"{name} has length {len(v)}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise ScenarioError(f"{name} has non-finite entries")
    return v


def parse_scenario(raw: dict, g: Graph | None = None) -> Scenario:
    """Validate a scenario mapping against an (optional) graph."""
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must be a mapping")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ScenarioError(f"scenario schema must be {SCHEMA_VERSION}")
    protocol = raw.get("protocol")
    if protocol not in (NOMINAL, ADAPTIVE):
        raise ScenarioError(f"protocol must be {NOMINAL!r} or {ADAPTIVE!r}")
    if "x0" not in raw:
        raise ScenarioError("scenario requires x0")
    x0 = np.asarray(raw["x0"], dtype=float)
    n = len(x0)
    if g is not None and n != g.n:
        raise ScenarioError(f"x0 has length {n} but graph has {g.n} nodes")
    x0 = _vector(raw["x0"], n, "x0")
    w = _vector(raw["w"], n, "w") if "w" in raw else np.zeros(n)
    x_hat0 = _vector(raw["x_hat0"], n, "x_hat0") if "x_hat0" in raw else None
    w_hat0 = _vector(raw["w_hat0"], n, "w_hat0") if "w_hat0" in raw else None
    dt = float(raw.get("dt", DEFAULT_DT))
    if "t_final" in raw:
        t_final = float(raw["t_final"])
    elif g is not None:
        t_final = default_t_final(g)
    else:
        raise ScenarioError("t_final required when no graph is available")
    alpha = raw.get("alpha")
    if protocol == ADAPTIVE:
        if alpha is None or not (float(alpha) > 0):
            raise ScenarioError("adaptive protocol requires alpha > 0")
        alpha = float(alpha)
    cfg = SimConfig(
        protocol=protocol,
        dt=dt,
        t_final=t_final,
        x0=x0,
        alpha=alpha if protocol == ADAPTIVE else None,
        x_hat0=x_hat0,
        w_hat0=w_hat0,
    )
    overridden = x_hat0 is not None and not np.array_equal(x_hat0, x0)
    return Scenario(
        config=cfg,
        w=w,
        graph_path=raw.get("graph"),
        x_hat0_overridden=overridden,
    )


def load_scenario(path, g: Graph | None = None) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError(f"cannot parse scenario {path}: {exc}") from exc
    return parse_scenario(raw, g)


def build_run_report(traj: Trajectory, w: np.ndarray) -> dict:
    """Machine-readable run summary, deterministic for a given trajectory."""
    cfg = traj.config
    g = traj.graph
    report: dict = {
        "protocol": cfg.protocol,
        "n": g.n,
        "dt": cfg.dt,
        "t_final": float(traj.times[-1]),
        "consensus_error_final": consensus_error(traj.x[-1]),
        "final_agreement": float(np.mean(traj.x[-1])),
    }
    x_t, w_t = error_series(traj, w)
    report["what_error_inf_final"] = float(np.max(np.abs(w_t[-1])))
    if cfg.protocol == ADAPTIVE:
        alpha = cfg.alpha
        sup, bound, assumption_ok = check_perturbation_bound(traj, w, alpha)
        max_inc, _ = check_energy_decay(traj, w, alpha)
        cen = centroid_analysis(traj, w)
        stab = verify_theorem(g, alpha)
        try:
            rate = fit_decay_rate(traj, w)
        except ScenarioError:
            rate = None
        report.update(
            {
                "alpha": alpha,
                "sup_xtilde": sup,
                "perturbation_bound": bound,
                "perturbation_bound_holds": bool(sup <= bound + 1e-9),
                "perturbation_assumption_ok": assumption_ok,
                "energy_max_increase": max_inc,
                "energy_nonincreasing": bool(max_inc <= 1e-9),
                "centroid_drift": cen.tail_drift,
                "centroid_agreement_gap": cen.final_agreement_gap,
                "decay_rate_fit": rate,
                "spectral_abscissa": stab.spectral_abscissa,
                "stability_verdict": stab.theorem_verdict,
            }
        )
    return report


def stability_report_dict(report) -> dict:
    """StabilityReport as plain data for serialization."""
    eigs = report.spectrum.eigenvalues
    return {
        "spectrum": [[float(v.real), float(v.imag)] for v in eigs],
        "spectral_abscissa": report.spectral_abscissa,
        "theorem_verdict": report.theorem_verdict,
        "decomposition_residual": report.decomposition_residual,
        "quadratic_inertia_predicted": [
            report.quadratic_inertia_predicted.n_plus,
            report.quadratic_inertia_predicted.n_zero,
            report.quadratic_inertia_predicted.n_minus,
        ],
        "quadratic_inertia_observed": [
            report.quadratic_inertia_observed.n_plus,
            report.quadratic_inertia_observed.n_zero,
            report.quadratic_inertia_observed.n_minus,
        ],
        "tol": report.tol,
    }


def dump_report(report: dict) -> str:
    """Deterministic YAML rendering of a report mapping."""
    return yaml.safe_dump(report, sort_keys=True, default_flow_style=False)
