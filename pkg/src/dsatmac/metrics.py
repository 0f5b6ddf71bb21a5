"""Run metrics: per-flow delivery counters, per-node energy, analytic bounds.

A ledger instance is shared by everything that observes one simulation
run. Flow counters are keyed by flow id, energy accumulators by node id.
Times inside the ledger are microseconds; throughput helpers convert to
bytes per second at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dsatmac.timing import FrameTiming, capacity_max_users

US_PER_S = 1_000_000

THROUGHPUT_MODES = ("data-only", "with-ack")


@dataclass
class FlowStats:
    flow_id: int
    source: int
    dest: int
    offered_packets: int = 0
    offered_bytes: int = 0
    delivered_packets: int = 0
    delivered_bytes: int = 0
    delay_total_us: int = 0
    delay_max_us: int = 0

    def record_arrival(self, nbytes: int) -> None:
        self.offered_packets += 1
        self.offered_bytes += nbytes

    def record_delivery(self, nbytes: int, delay_us: int) -> None:
        if delay_us < 0:
            raise ValueError(f"negative delivery delay: {delay_us}")
        self.delivered_packets += 1
        self.delivered_bytes += nbytes
        self.delay_total_us += delay_us
        self.delay_max_us = max(self.delay_max_us, delay_us)

    @property
    def mean_delay_us(self) -> float | None:
        if self.delivered_packets == 0:
            return None
        return self.delay_total_us / self.delivered_packets

    def throughput_bytes_per_s(self, duration_us: int) -> float:
        if duration_us <= 0:
            raise ValueError(f"duration must be positive, got {duration_us}")
        return self.delivered_bytes * US_PER_S / duration_us


@dataclass
class NodeEnergy:
    tx_j: float = 0.0
    rx_j: float = 0.0
    idle_j: float = 0.0

    @property
    def total_j(self) -> float:
        return self.tx_j + self.rx_j + self.idle_j


@dataclass
class MetricsLedger:
    duration_us: int = 0
    frames: int = 0
    sensing_idle: int = 0       # quiet periods that found the channel free
    sensing_busy: int = 0
    nus_attempts: int = 0
    nus_collisions: int = 0
    requests_denied: int = 0
    slots_granted: int = 0
    data_packets_tx: int = 0
    acks_tx: int = 0
    flows: dict[int, FlowStats] = field(default_factory=dict)
    nodes: dict[int, NodeEnergy] = field(default_factory=dict)

    def add_flow(self, flow_id: int, source: int, dest: int) -> FlowStats:
        if flow_id in self.flows:
            raise ValueError(f"duplicate flow id {flow_id}")
        stats = FlowStats(flow_id, source, dest)
        self.flows[flow_id] = stats
        return stats

    def flow(self, flow_id: int) -> FlowStats:
        return self.flows[flow_id]

    def node(self, node_id: int) -> NodeEnergy:
        # accumulators appear on first touch so idle nodes still report zeros
        return self.nodes.setdefault(node_id, NodeEnergy())

    @property
    def delivered_bytes_total(self) -> int:
        return sum(f.delivered_bytes for f in self.flows.values())

    @property
    def offered_bytes_total(self) -> int:
        return sum(f.offered_bytes for f in self.flows.values())

    @property
    def mean_delay_us(self) -> float | None:
        packets = sum(f.delivered_packets for f in self.flows.values())
        if packets == 0:
            return None
        return sum(f.delay_total_us for f in self.flows.values()) / packets

    def network_throughput_bytes_per_s(self) -> float:
        if self.duration_us <= 0:
            raise ValueError("ledger has no duration; run not finished?")
        return self.delivered_bytes_total * US_PER_S / self.duration_us


def theoretical_throughput(
    timing: FrameTiming,
    n_nodes: int,
    bytes_per_slot: int,
    mode: str = "data-only",
) -> float:
    """Upper bound on network throughput in bytes per second.

    The control phase of every superframe spends the quiet period plus
    one control slot per registered node; the remainder carries data.
    ``data-only`` prices a slot at the data airtime alone and is the
    looser bound; ``with-ack`` adds the ack airtime each slot actually
    occupies. Continuous division, so this ignores slot quantization.
    """
    if mode not in THROUGHPUT_MODES:
        raise ValueError(f"mode must be one of {THROUGHPUT_MODES}, got {mode!r}")
    if bytes_per_slot <= 0:
        raise ValueError(f"bytes_per_slot must be positive, got {bytes_per_slot}")
    if not 0 <= n_nodes <= capacity_max_users(timing):
        raise ValueError(
            f"n_nodes {n_nodes} outside 0..{capacity_max_users(timing)}"
        )
    window_us = timing.superframe_us - timing.quiet_us - n_nodes * timing.control_us
    if window_us <= 0:
        return 0.0
    slot_us = timing.data_us
    if mode == "with-ack":
        slot_us += timing.ack_us
    superframe_s = timing.superframe_us / US_PER_S
    slot_s = slot_us / US_PER_S
    return bytes_per_slot * (window_us / US_PER_S) / (superframe_s * slot_s)


def fairness_ratios(ledger: MetricsLedger, flow_ids: list[int] | None = None) -> list[float]:
    """Each flow's delivered bytes divided by the mean across flows.

    Equal service shows up as ratios near 1. Raises if nothing was
    delivered at all, since the ratios would be 0/0.
    """
    if flow_ids is None:
        flow_ids = sorted(ledger.flows)
    if not flow_ids:
        raise ValueError("no flows to compare")
    delivered = [ledger.flow(fid).delivered_bytes for fid in flow_ids]
    total = sum(delivered)
    if total == 0:
        raise ValueError("no flow delivered any bytes; ratios undefined")
    mean = total / len(delivered)
    return [d / mean for d in delivered]
