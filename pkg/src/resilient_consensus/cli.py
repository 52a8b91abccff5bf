"""Command-line front-end.

Subcommands:
    simulate  run a scenario, write the trajectory CSV, print the run report
    verify    spectral stability certificate for a graph and gain
    sweep     repeat a scenario over a list of gains, write a summary CSV
    analyze   recompute the run report from a stored trajectory CSV

Exit codes: 0 success, 1 input error, 2 verification failure, 3 numerical
failure. All output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .dynamics import (
    ADAPTIVE,
    read_trajectory_csv,
    simulate,
    write_trajectory_csv,
)
from .errors import (
    ConsensusToolkitError,
    DisconnectedGraphError,
    NumericalBlowupError,
)
from .graph import is_connected, load_edge_list
from .scenario import (
    build_run_report,
    dump_report,
    load_scenario,
    stability_report_dict,
)
from .stability import DEFAULT_SPECTRAL_TOL, verify_theorem

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3


def _load_graph(args, scenario=None):
    path = args.graph or (scenario.graph_path if scenario else None)
    if path is None:
        raise ConsensusToolkitError("no graph file given (use --graph)")
    g = load_edge_list(path)
    if not is_connected(g):
        raise DisconnectedGraphError("graph not connected")
    return g


def _print_report(report: dict, title: str) -> None:
    print(f"# {title}")
    sys.stdout.write(dump_report(report))


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    sc = load_scenario(args.scenario, g)
    cfg = sc.config
    if args.dt is not None:
        cfg = replace(cfg, dt=args.dt)
    if args.t_final is not None:
        cfg = replace(cfg, t_final=args.t_final)
    traj = simulate(g, cfg, sc.w)
    write_trajectory_csv(traj, args.out)
    report = build_run_report(traj, sc.w)
    if sc.x_hat0_overridden:
        report["x_hat0_overridden"] = True
    _print_report(report, f"run report ({args.scenario})")
    print(f"trajectory written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args)
    report = verify_theorem(g, args.alpha, tol=args.tol)
    _print_report(stability_report_dict(report), f"stability report (alpha={args.alpha})")
    if not report.theorem_verdict:
        print("VERDICT: unstable (theorem contradiction)", file=sys.stderr)
        return EXIT_VERIFY
    print("VERDICT: exponentially stable")
    return EXIT_OK


def cmd_sweep(args) -> int:
    alphas = sorted({float(a) for a in args.alpha})
    if not alphas:
        raise ConsensusToolkitError("empty alpha list")
    g = _load_graph(args)
    sc = load_scenario(args.scenario, g)
    if sc.config.protocol != ADAPTIVE:
        raise ConsensusToolkitError("sweep requires an adaptive scenario")
    rows = []
    for alpha in alphas:
        cfg = replace(sc.config, alpha=alpha)
        if args.dt is not None:
            cfg = replace(cfg, dt=args.dt)
        if args.t_final is not None:
            cfg = replace(cfg, t_final=args.t_final)
        traj = simulate(g, cfg, sc.w)
        report = build_run_report(traj, sc.w)
        rows.append(
            (
                alpha,
                report["sup_xtilde"],
                report["perturbation_bound"],
                report["centroid_drift"],
                report["decay_rate_fit"],
            )
        )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("alpha,sup_xtilde,bound,centroid_drift,decay_rate\n")
        for row in rows:
            fh.write(",".join("" if v is None else repr(float(v)) for v in row) + "\n")
    print(f"sweep written to {args.out} ({len(rows)} rows)")
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    sc = load_scenario(args.scenario, g)
    traj = read_trajectory_csv(args.trajectory, g, sc.config)
    report = build_run_report(traj, sc.w)
    if sc.x_hat0_overridden:
        report["x_hat0_overridden"] = True
    _print_report(report, f"run report ({args.trajectory})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resilient-consensus",
        description="Simulate and verify resilient consensus under constant disturbances.",
    )
    parser.add_argument("--seed", type=int, default=None, help="seed echoed into output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario and write the trajectory")
    p_sim.add_argument("--graph", required=False, help="edge-list file")
    p_sim.add_argument("--scenario", required=True, help="scenario YAML")
    p_sim.add_argument("--out", required=True, help="trajectory CSV output path")
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.add_argument("--t-final", type=float, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="spectral stability certificate")
    p_ver.add_argument("--graph", required=True, help="edge-list file")
    p_ver.add_argument("--alpha", type=float, required=True)
    p_ver.add_argument("--tol", type=float, default=DEFAULT_SPECTRAL_TOL)
    p_ver.set_defaults(func=cmd_verify)

    p_sw = sub.add_parser("sweep", help="repeat a scenario over a gain list")
    p_sw.add_argument("--graph", required=False, help="edge-list file")
    p_sw.add_argument("--scenario", required=True, help="scenario YAML")
    p_sw.add_argument("--alpha", type=float, nargs="*", required=True)
    p_sw.add_argument("--out", required=True, help="sweep CSV output path")
    p_sw.add_argument("--dt", type=float, default=None)
    p_sw.add_argument("--t-final", type=float, default=None)
    p_sw.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="recompute the report from a stored CSV")
    p_an.add_argument("--trajectory", required=True, help="trajectory CSV")
    p_an.add_argument("--graph", required=False, help="edge-list file")
    p_an.add_argument("--scenario", required=True, help="scenario YAML")
    p_an.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        print(f"seed: {args.seed}")
    try:
        return args.func(args)
    except NumericalBlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConsensusToolkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
