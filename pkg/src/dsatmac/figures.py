"""Quick-look figures for the report path.

The CSV stays the machine-readable contract; these plots exist so a
sweep can be eyeballed without importing anything. Everything renders
through the Agg backend straight to PNG files.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from dsatmac.experiment import RunResult
from dsatmac.metrics import theoretical_throughput
from dsatmac.scenario import Scenario


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", name).strip("-") or "scenario"


def _grouped(results: list[RunResult]) -> list[tuple[int, list[RunResult]]]:
    groups: dict[int, list[RunResult]] = {}
    for r in results:
        groups.setdefault(r.point_index, []).append(r)
    return sorted(groups.items())


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _sweep_axis(scenario: Scenario,
                groups: list[tuple[int, list[RunResult]]]) -> tuple[list, str]:
    if scenario.sweep is None:
        return [g[1][0].seed for g in groups], "seed"
    return [g[1][0].sweep_value for g in groups], scenario.sweep.parameter


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def throughput_figure(scenario: Scenario, results: list[RunResult],
                      path: Path) -> Path:
    groups = _grouped(results)
    xs, xlabel = _sweep_axis(scenario, groups)
    fig, ax = _new_axes(f"{scenario.name}: throughput", xlabel, "bytes/s")
    if scenario.sweep is None:
        # no sweep: one point per seed
        ax.plot([r.seed for r in results],
                [r.ledger.network_throughput_bytes_per_s() for r in results],
                "o-", label="measured")
    else:
        means = [_mean([r.ledger.network_throughput_bytes_per_s() for r in runs])
                 for _, runs in groups]
        ax.plot(xs, means, "o-", label="measured (mean over seeds)")
        for r in results:
            ax.plot(r.sweep_value, r.ledger.network_throughput_bytes_per_s(),
                    ".", color="gray", alpha=0.5, markersize=4)
    if scenario.mac == "dsat":
        for mode, style in (("data-only", "--"), ("with-ack", ":")):
            bounds = [
                theoretical_throughput(runs[0].scenario.timing,
                                       runs[0].scenario.nodes.count,
                                       runs[0].scenario.bytes_per_slot, mode)
                for _, runs in groups
            ]
            ax.plot(xs, bounds, style, label=f"bound ({mode})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def delay_figure(scenario: Scenario, results: list[RunResult],
                 path: Path) -> Path | None:
    groups = _grouped(results)
    xs, xlabel = _sweep_axis(scenario, groups)
    points = []
    for x, (_, runs) in zip(xs, groups):
        delays = [r.ledger.mean_delay_us for r in runs
                  if r.ledger.mean_delay_us is not None]
        if delays:
            points.append((x, _mean(delays) / 1000))
    if not points:
        return None
    fig, ax = _new_axes(f"{scenario.name}: packet delay", xlabel, "mean delay (ms)")
    ax.plot([p[0] for p in points], [p[1] for p in points], "o-")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def energy_figure(scenario: Scenario, results: list[RunResult],
                  path: Path) -> Path:
    # the final sweep point carries the fullest node population
    groups = _grouped(results)
    _, runs = groups[-1]
    nodes = sorted(runs[0].ledger.nodes)
    tx = [_mean([r.ledger.node(n).tx_j for r in runs]) for n in nodes]
    rx = [_mean([r.ledger.node(n).rx_j for r in runs]) for n in nodes]
    fig, ax = _new_axes(f"{scenario.name}: energy by node", "node", "joules")
    ax.bar(nodes, tx, label="tx", color="#c44e52")
    ax.bar(nodes, rx, bottom=tx, label="rx", color="#4c72b0")
    ax.set_xticks(nodes)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_figures(scenario: Scenario, results: list[RunResult],
                   out_dir: str | Path) -> list[Path]:
    """Render the standard figure set; returns the files written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    slug = _slug(scenario.name)
    written = [
        throughput_figure(scenario, results, out_dir / f"{slug}_throughput.png")
    ]
    delay = delay_figure(scenario, results, out_dir / f"{slug}_delay.png")
    if delay is not None:
        written.append(delay)
    written.append(energy_figure(scenario, results, out_dir / f"{slug}_energy.png"))
    return written
