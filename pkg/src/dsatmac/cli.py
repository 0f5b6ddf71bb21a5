"""Command line front end.

Exit codes: 0 on success, 1 when the scenario file is missing or
malformed, 2 when a run fails after validation passed. Output paths
default to the directory named by DSATMAC_OUT_DIR, falling back to the
working directory.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

from dsatmac import __version__
from dsatmac.energy import energy_breakdown
from dsatmac.experiment import run_experiment, write_csv
from dsatmac.kernel import run_simulation
from dsatmac.metrics import theoretical_throughput
from dsatmac.scenario import Scenario, ScenarioError, load_scenario, sweep_points


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", name).strip("-") or "scenario"


def _out_dir(override: str | None) -> Path:
    if override:
        return Path(override)
    return Path(os.environ.get("DSATMAC_OUT_DIR", "."))


def _reseed(scenario: Scenario, seed: int | None) -> Scenario:
    """--seed pins a single replication instead of the default set."""
    if seed is None:
        return scenario
    return replace(scenario, seed=seed, replications=1)


def _write_trace(scenario: Scenario, path: Path) -> int:
    _, first = sweep_points(scenario)[0]
    sim = run_simulation(first, first.seeds[0], trace=True)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(sim.trace_lines) + "\n")
    return len(sim.trace_lines)


def cmd_simulate(args: argparse.Namespace, scenario: Scenario) -> int:
    scenario = _reseed(scenario, args.seed)
    results = run_experiment(scenario, jobs=args.jobs)
    out = Path(args.out) if args.out else _out_dir(None) / f"{_slug(scenario.name)}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, scenario, results)
    print(f"wrote {out} ({len(results)} runs)")
    if args.trace:
        trace_path = Path(args.trace)
        n = _write_trace(scenario, trace_path)
        print(f"wrote {trace_path} ({n} events)")
    return 0


def cmd_report(args: argparse.Namespace, scenario: Scenario) -> int:
    # figures pull in matplotlib, which the other commands never need
    from dsatmac.figures import render_figures

    scenario = _reseed(scenario, args.seed)
    results = run_experiment(scenario, jobs=args.jobs)
    out_dir = _out_dir(args.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = write_csv(out_dir / f"{_slug(scenario.name)}.csv", scenario, results)
    print(f"wrote {csv_path} ({len(results)} runs)")
    for figure in render_figures(scenario, results, out_dir):
        print(f"wrote {figure}")
    return 0


def cmd_analytic_throughput(args: argparse.Namespace, scenario: Scenario) -> int:
    for value, point in sweep_points(scenario):
        n = args.nodes if args.nodes is not None else point.nodes.count
        data_only = theoretical_throughput(
            point.timing, n, point.bytes_per_slot, "data-only"
        )
        with_ack = theoretical_throughput(
            point.timing, n, point.bytes_per_slot, "with-ack"
        )
        label = "-" if value is None else f"{value:g}"
        print(
            f"point={label} n_nodes={n} "
            f"data_only_bytes_per_s={data_only:.3f} "
            f"with_ack_bytes_per_s={with_ack:.3f}"
        )
    return 0


def cmd_analytic_energy(args: argparse.Namespace, scenario: Scenario) -> int:
    for value, point in sweep_points(scenario):
        n = args.nodes if args.nodes is not None else point.nodes.count
        b = energy_breakdown(point.timing, n, point.radio)
        label = "-" if value is None else f"{value:g}"
        print(
            f"point={label} n_nodes={b.n_nodes} data_slots={b.data_slots} "
            f"slots_each={b.slots_each} "
            f"fixed_power_j_per_frame={b.e_without_control_j:.9f} "
            f"power_control_j_per_frame={b.e_with_control_expected_j:.9f} "
            f"power_saved_w={b.power_saved_w:.6f}"
        )
    return 0


def cmd_validate(args: argparse.Namespace, scenario: Scenario) -> int:
    sweep = scenario.sweep.parameter if scenario.sweep else "-"
    print(
        f"ok: {args.scenario}: mac={scenario.mac} nodes={scenario.nodes.count} "
        f"flows={len(scenario.flows)} sweep={sweep} "
        f"replications={scenario.replications}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsatmac",
        description="TDMA MAC simulator for sensed spectrum, with an "
                    "RTS/CTS baseline and closed-form reference curves.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario, write the results CSV")
    sim.add_argument("scenario", help="scenario file")
    sim.add_argument("--seed", type=int, help="run exactly one replication with this seed")
    sim.add_argument("--trace", metavar="PATH", help="also write an event trace of the first run")
    sim.add_argument("--out", metavar="PATH", help="results CSV path")
    sim.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", help="results CSV plus quick-look PNG figures")
    rep.add_argument("scenario", help="scenario file")
    rep.add_argument("--seed", type=int, help="run exactly one replication with this seed")
    rep.add_argument("--dir", metavar="DIR", help="output directory")
    rep.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
    rep.set_defaults(func=cmd_report)

    ana = sub.add_parser("analytic", help="print closed-form curves, no simulation")
    ana_sub = ana.add_subparsers(dest="model", required=True)
    thr = ana_sub.add_parser("throughput", help="throughput bounds per sweep point")
    thr.add_argument("scenario", help="scenario file")
    thr.add_argument("--nodes", type=int, help="override the registered node count")
    thr.set_defaults(func=cmd_analytic_throughput)
    ene = ana_sub.add_parser("energy", help="per-frame energy and power saved")
    ene.add_argument("scenario", help="scenario file")
    ene.add_argument("--nodes", type=int, help="override the registered node count")
    ene.set_defaults(func=cmd_analytic_energy)

    val = sub.add_parser("validate", help="parse and cross-check a scenario file")
    val.add_argument("scenario", help="scenario file")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args, scenario)
    except Exception as exc:  # CLI boundary: report, don't traceback
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
