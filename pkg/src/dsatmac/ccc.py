"""Baseline MAC: CSMA/CA with RTS/CTS over a common control channel.

The comparison point for the TDMA scheduler. Nodes contend on a
dedicated control channel (channel 0) with binary exponential backoff;
the winning reservation moves one whole queued packet across the data
channel (channel 1) and is acked there. Both channels must be free of
primary users, which is the whole premise being argued against: the
design only works while those two bands stay clean.

The medium is fully serialized, so rather than an event heap the run
is a loop over contention rounds. Each round snapshots the queues,
draws one backoff per contender, and advances the clock by the closed
form round duration. Arrivals landing mid-round join the next snapshot.

Simplifications, chosen to keep the baseline legible rather than
faithful to any particular radio: losing contenders redraw a fresh
backoff next round instead of freezing their counter, collisions cost
one CTS timeout, and capture effects do not exist.
"""

from __future__ import annotations

import heapq
from collections import deque
from math import ceil

from dsatmac.kernel import Transmission, substream
from dsatmac.mac import QueueEntry
from dsatmac.metrics import MetricsLedger
from dsatmac.pu import PuIdle
from dsatmac.scenario import FlowSpec, Scenario

MW_TO_W = 1e-3
US_TO_S = 1e-6


class CccSimulation:
    """One seeded run of the RTS/CTS baseline."""

    def __init__(self, scenario: Scenario, seed: int, *, trace: bool = False):
        if scenario.mac != "ccc":
            raise ValueError(f"baseline runs ccc scenarios, got mac={scenario.mac!r}")
        if scenario.sweep is not None:
            raise ValueError("apply the sweep before running (see sweep_points)")
        for channel in scenario.channels:
            if not isinstance(channel.pu, PuIdle):
                raise ValueError(
                    "the control-channel baseline assumes both of its channels "
                    f"stay vacant; channel {channel.channel_id} has a primary user"
                )
        self.scenario = scenario
        self.seed = seed
        self.params = scenario.ccc
        self.ledger = MetricsLedger()
        self.trace_lines: list[str] | None = [] if trace else None
        self.tx_log: list[Transmission] = []

        self.queues: dict[int, deque[QueueEntry]] = {
            i: deque() for i in range(1, scenario.nodes.count + 1)
        }
        self.cw: dict[int, int] = {i: self.params.cw_min for i in self.queues}
        self.rngs = {i: substream(seed, f"ccc:{i}") for i in self.queues}

        self.flows: dict[int, FlowSpec] = {}
        self._arrivals: list[tuple[int, int]] = []
        for flow in scenario.flows:
            self.flows[flow.flow_id] = flow
            self.ledger.add_flow(flow.flow_id, flow.source, flow.dest)
            stop = flow.stop_us if flow.stop_us is not None else scenario.sim_time_us
            stop = min(stop, scenario.sim_time_us)
            if flow.interval_us == 0:
                if flow.start_us < stop:
                    heapq.heappush(self._arrivals, (flow.start_us, flow.flow_id))
            else:
                t = flow.start_us
                while t < stop:
                    heapq.heappush(self._arrivals, (t, flow.flow_id))
                    t += flow.interval_us
        for i in self.queues:
            self.ledger.node(i)

    def _trace(self, t: int, text: str) -> None:
        if self.trace_lines is not None:
            self.trace_lines.append(f"us={t} {text}")

    def _enqueue(self, flow: FlowSpec, arrival_us: int) -> None:
        entry = QueueEntry(
            flow_id=flow.flow_id,
            dest=flow.dest,
            total_bytes=flow.packet_bytes,
            remaining_bytes=flow.packet_bytes,
            arrival_us=arrival_us,
            data_type=flow.data_type,
            pi_override=flow.pi_override,
        )
        self.ledger.flow(flow.flow_id).record_arrival(flow.packet_bytes)
        self.queues[flow.source].append(entry)

    def _flush_arrivals(self, now: int) -> None:
        while self._arrivals and self._arrivals[0][0] <= now:
            t, flow_id = heapq.heappop(self._arrivals)
            self._enqueue(self.flows[flow_id], t)

    def _bill(self, start: int, end: int, channel: int, kind: str,
              transmitters: list[int], dest: int | None) -> None:
        power = self.scenario.radio.tx_power_max_mw
        seconds = (end - start) * US_TO_S
        for src in transmitters:
            self.tx_log.append(Transmission(start, end, channel, src, dest, kind, power))
            self.ledger.node(src).tx_j += power * MW_TO_W * seconds
        rx_energy = self.scenario.radio.rx_power_mw * MW_TO_W * seconds
        for node in self.queues:
            if node not in transmitters:
                self.ledger.node(node).rx_j += rx_energy

    def _data_airtime_us(self, nbytes: int) -> int:
        # scaled from the slotted rate: a full bytes_per_slot payload
        # occupies one data_us slot
        return ceil(nbytes * self.scenario.timing.data_us / self.scenario.bytes_per_slot)

    def run(self) -> MetricsLedger:
        p = self.params
        end = self.scenario.sim_time_us
        now = 0
        while True:
            self._flush_arrivals(now)
            contenders = [i for i in sorted(self.queues) if self.queues[i]]
            if not contenders:
                if not self._arrivals:
                    break
                now = max(now, self._arrivals[0][0])
                continue
            draws = {i: self.rngs[i].randrange(self.cw[i]) for i in contenders}
            best = min(draws.values())
            winners = [i for i in contenders if draws[i] == best]
            rts_start = now + p.difs_us + best * p.slot_us
            rts_end = rts_start + p.rts_us

            if len(winners) > 1:
                round_end = rts_end + p.sifs_us + p.cts_us
                if round_end > end:
                    break
                self._bill(rts_start, rts_end, 0, "rts", winners, None)
                for i in winners:
                    self.cw[i] = min(self.cw[i] * 2, p.cw_max)
                self._trace(now, f"ev=rts-collision nodes={winners} backoff={best}")
                now = round_end
                continue

            winner = winners[0]
            entry = self.queues[winner][0]
            data_us = self._data_airtime_us(entry.total_bytes)
            cts_start = rts_end + p.sifs_us
            data_start = cts_start + p.cts_us + p.sifs_us
            ack_start = data_start + data_us + p.sifs_us
            round_end = ack_start + p.ack_us
            if round_end > end:
                break
            self._bill(rts_start, rts_end, 0, "rts", [winner], entry.dest)
            self._bill(cts_start, cts_start + p.cts_us, 0, "cts", [entry.dest], winner)
            self._bill(data_start, data_start + data_us, 1, "data", [winner], entry.dest)
            self._bill(ack_start, round_end, 1, "ack", [entry.dest], winner)
            self.ledger.data_packets_tx += 1
            self.ledger.acks_tx += 1
            self.queues[winner].popleft()
            self.cw[winner] = p.cw_min
            delay = round_end - entry.arrival_us
            self.ledger.flow(entry.flow_id).record_delivery(entry.total_bytes, delay)
            self._trace(
                now,
                f"ev=deliver flow={entry.flow_id} src={winner} "
                f"bytes={entry.total_bytes} delay_us={delay}",
            )
            flow = self.flows[entry.flow_id]
            if flow.interval_us == 0 and (
                flow.stop_us is None or round_end < flow.stop_us
            ) and round_end < end:
                self._enqueue(flow, round_end)
            now = round_end

        self.ledger.duration_us = end
        return self.ledger
