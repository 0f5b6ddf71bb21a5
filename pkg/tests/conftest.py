"""Shared helpers for the test suite."""

import pathlib
import textwrap

from dsatmac.scenario import parse_scenario

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def scenario_path(name: str) -> pathlib.Path:
    return SCENARIO_DIR / name


def make_scenario(body: str):
    """Parse an indented scenario literal from a test."""
    return parse_scenario(textwrap.dedent(body))


def assert_exclusive_airtime(tx_log):
    """No two transmissions may overlap on a channel.

    The one sanctioned exception is new-user contention: colliding
    joiners transmit over each other in the same subslot, which is the
    collision being modelled.
    """
    by_channel: dict[int, list] = {}
    for tx in tx_log:
        by_channel.setdefault(tx.channel, []).append(tx)
    for channel, entries in by_channel.items():
        entries.sort(key=lambda tx: (tx.start_us, tx.end_us, tx.source))
        for prev, cur in zip(entries, entries[1:]):
            if cur.start_us >= prev.end_us:
                continue
            both_nus = prev.kind == "nus" and cur.kind == "nus"
            assert both_nus and cur.start_us == prev.start_us, (
                f"channel {channel}: {prev} overlaps {cur}"
            )


def assert_silent_while_pu_detected(sim):
    """Between a busy sensing verdict and the next idle one, nobody talks."""
    silence: list[tuple[int, int]] = []
    busy_since = None
    for window_start, window_end, busy in sim.verdicts:
        if busy and busy_since is None:
            busy_since = window_end
        elif not busy and busy_since is not None:
            silence.append((busy_since, window_start))
            busy_since = None
    if busy_since is not None:
        silence.append((busy_since, sim.scenario.sim_time_us))
    for tx in sim.tx_log:
        for start, end in silence:
            assert not (tx.start_us < end and tx.end_us > start), (
                f"{tx} transmitted while the primary user was detected "
                f"({start}..{end})"
            )
