"""Sweep execution and delimited results assembly.

A scenario expands into sweep points, each point runs once per
replication seed, and every run becomes one CSV row. The column set is
fixed up front from the whole sweep (widest flow and node population),
so rows from different points always align; cells that do not apply to
a given point are left empty rather than zero-filled.

Rows are emitted in (sweep point, seed) order regardless of how many
workers ran them, so reruns produce byte-identical files.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from dsatmac.kernel import run_simulation
from dsatmac.metrics import MetricsLedger, fairness_ratios, theoretical_throughput
from dsatmac.scenario import Scenario, sweep_points

SCHEMA_COMMENT = "# schema: dsatmac.results.v1"

_BASE_COLUMNS = [
    "scenario", "mac", "sweep_parameter", "sweep_value", "seed",
    "sim_time_ms", "n_nodes", "n_flows", "frames",
    "sensing_busy", "sensing_idle",
    "throughput_bytes_per_s", "mean_delay_ms",
    "analytic_data_only_bytes_per_s", "analytic_with_ack_bytes_per_s",
]


@dataclass(frozen=True)
class RunResult:
    point_index: int
    sweep_value: float | int | None
    seed: int
    scenario: Scenario      # the concrete point, sweep already applied
    ledger: MetricsLedger


def run_experiment(scenario: Scenario, jobs: int = 1) -> list[RunResult]:
    """Run every (sweep point, seed) combination; results in row order."""
    tasks = []
    for index, (value, concrete) in enumerate(sweep_points(scenario)):
        for seed in concrete.seeds:
            tasks.append((index, value, seed, concrete))

    def _run(task: tuple) -> RunResult:
        index, value, seed, concrete = task
        sim = run_simulation(concrete, seed)
        return RunResult(index, value, seed, concrete, sim.ledger)

    if jobs <= 1:
        return [_run(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run, tasks))


def _column_universe(scenario: Scenario) -> tuple[list[int], list[int]]:
    flow_ids: set[int] = set()
    max_nodes = 0
    for _, concrete in sweep_points(scenario):
        flow_ids.update(f.flow_id for f in concrete.flows)
        max_nodes = max(max_nodes, concrete.nodes.count)
    return sorted(flow_ids), list(range(1, max_nodes + 1))


def results_header(scenario: Scenario) -> list[str]:
    flow_ids, node_ids = _column_universe(scenario)
    header = list(_BASE_COLUMNS)
    for fid in flow_ids:
        header += [
            f"flow{fid}_throughput_bytes_per_s",
            f"flow{fid}_mean_delay_ms",
            f"flow{fid}_delivered_bytes",
            f"flow{fid}_offered_bytes",
            f"flow{fid}_fairness",
        ]
    for nid in node_ids:
        header += [
            f"node{nid}_energy_tx_j",
            f"node{nid}_energy_rx_j",
            f"node{nid}_energy_idle_j",
        ]
    return header


def _f(value: float) -> str:
    return f"{value:.6f}"


def _delay_cell(delay_us: float | None) -> str:
    return "" if delay_us is None else _f(delay_us / 1000)


def results_rows(scenario: Scenario, results: list[RunResult]) -> list[list[str]]:
    flow_ids, node_ids = _column_universe(scenario)
    sweep_param = scenario.sweep.parameter if scenario.sweep else ""
    rows = []
    for r in results:
        point = r.scenario
        led = r.ledger
        row = [
            scenario.name,
            point.mac,
            sweep_param,
            "" if r.sweep_value is None else f"{r.sweep_value:g}",
            str(r.seed),
            f"{point.sim_time_us / 1000:g}",
            str(point.nodes.count),
            str(len(point.flows)),
            str(led.frames),
            str(led.sensing_busy),
            str(led.sensing_idle),
            _f(led.network_throughput_bytes_per_s()),
            _delay_cell(led.mean_delay_us),
        ]
        if point.mac == "dsat":
            row += [
                _f(theoretical_throughput(point.timing, point.nodes.count,
                                          point.bytes_per_slot, mode))
                for mode in ("data-only", "with-ack")
            ]
        else:
            row += ["", ""]
        point_flows = sorted(f.flow_id for f in point.flows)
        try:
            fairness = dict(zip(point_flows, fairness_ratios(led, point_flows)))
        except ValueError:
            fairness = {}
        for fid in flow_ids:
            if fid in led.flows:
                stats = led.flow(fid)
                row += [
                    _f(stats.throughput_bytes_per_s(led.duration_us)),
                    _delay_cell(stats.mean_delay_us),
                    str(stats.delivered_bytes),
                    str(stats.offered_bytes),
                    _f(fairness[fid]) if fid in fairness else "",
                ]
            else:
                row += [""] * 5
        for nid in node_ids:
            if nid <= point.nodes.count:
                energy = led.node(nid)
                row += [
                    f"{energy.tx_j:.9f}",
                    f"{energy.rx_j:.9f}",
                    f"{energy.idle_j:.9f}",
                ]
            else:
                row += [""] * 3
        rows.append(row)
    return rows


def write_csv(path: str | Path, scenario: Scenario,
              results: list[RunResult]) -> Path:
    """Write the schema comment, header and one row per run."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(SCHEMA_COMMENT + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(results_header(scenario))
        writer.writerows(results_rows(scenario, results))
    return path
