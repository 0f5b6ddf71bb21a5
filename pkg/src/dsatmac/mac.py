"""Per-node MAC state: registration phase, packet queue, chunking.

A node is a passive listener by default. It registers (via the new-user
slot) only when it has data queued, keeps its control slot alive with
heartbeats while registered, and silently drops out after a configured
number of idle superframes; the registry heals around it one superframe
later. Listening never stops, so an unregistered node still receives
and acks traffic addressed to it, and its registry copy stays current.

Large packets cross superframes as chunks of at most one slot's payload.
A chunk only counts once its ack came back clean; the byte counter
rewinds to the last acked chunk on any loss, so receivers keep no
reassembly state.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

from dsatmac.priority import DataType, PriorityInputs, priority_index
from dsatmac.registry import CusRegistry
from dsatmac.scenario import NodeLayout


class NodePhase(enum.Enum):
    OBSERVING = "observing"     # fresh: must watch one full superframe
    PASSIVE = "passive"         # listening, unregistered
    REGISTERED = "registered"   # owns a control slot


@dataclass
class QueueEntry:
    flow_id: int
    dest: int
    total_bytes: int
    remaining_bytes: int
    arrival_us: int
    data_type: DataType
    pi_override: int | None


@dataclass
class PendingChunk:
    entry: QueueEntry
    nbytes: int


class Node:
    def __init__(
        self,
        node_id: int,
        position: tuple[float, float],
        registry_capacity: int,
        sleep_after_idle_frames: int,
    ):
        self.node_id = node_id
        self.position = position
        self.phase = NodePhase.OBSERVING
        self.queue: deque[QueueEntry] = deque()
        self.registry = CusRegistry(registry_capacity)
        self.frames_observed = 0
        self.idle_frames = 0
        self.sleep_after_idle_frames = sleep_after_idle_frames
        self.pending: PendingChunk | None = None

    # ------------------------------------------------------------ queue

    def enqueue(self, entry: QueueEntry) -> None:
        self.queue.append(entry)

    @property
    def backlog_bytes(self) -> int:
        return sum(e.remaining_bytes for e in self.queue)

    def is_contender(self) -> bool:
        """Ready to fight for the new-user slot this superframe."""
        return self.phase is NodePhase.PASSIVE and bool(self.queue)

    # ---------------------------------------------------------- control

    def control_demand(
        self, now_us: int, superframe_us: int, bytes_per_slot: int, max_slots: int
    ) -> tuple[int, int]:
        """(priority index, slots requested) for this superframe's control packet.

        The request covers the head packet's remaining bytes only; the
        rest of the queue waits its turn, which is what keeps one deep
        queue from freezing out equal-priority peers. An empty queue
        yields the (0, 0) heartbeat.
        """
        if not self.queue:
            return 0, 0
        head = self.queue[0]
        if head.pi_override is not None:
            pi = head.pi_override
        else:
            waited_frames = max(0, now_us - head.arrival_us) // superframe_us
            pi = priority_index(
                PriorityInputs(head.data_type, len(self.queue), waited_frames)
            )
        slots = math.ceil(head.remaining_bytes / bytes_per_slot)
        return pi, max(1, min(slots, max_slots))

    # ------------------------------------------------------------- data

    def start_chunk(self, bytes_per_slot: int) -> PendingChunk | None:
        """Claim the next chunk of the head packet for one data slot."""
        if self.pending is not None:
            raise RuntimeError(f"node {self.node_id} already has a chunk in flight")
        if not self.queue:
            return None
        head = self.queue[0]
        self.pending = PendingChunk(head, min(head.remaining_bytes, bytes_per_slot))
        return self.pending

    def abort_chunk(self) -> None:
        """The chunk or its ack was lost; the bytes stay owed."""
        self.pending = None

    def commit_chunk(self) -> QueueEntry | None:
        """Ack received: advance the head packet, pop it when finished.

        Returns the completed entry, or None if bytes remain.
        """
        if self.pending is None:
            raise RuntimeError(f"node {self.node_id} has no chunk in flight")
        entry = self.pending.entry
        entry.remaining_bytes -= self.pending.nbytes
        self.pending = None
        if entry.remaining_bytes > 0:
            return None
        self.queue.popleft()
        return entry

    # ------------------------------------------------------ frame edges

    def end_frame(self, registered: bool) -> bool:
        """Per-superframe bookkeeping; True if the node decides to leave.

        A registered node with nothing queued for ``sleep_after_idle_frames``
        consecutive superframes stops heartbeating (0 disables this).
        Leaving is silent: the registry heals around the node next frame.
        """
        self.frames_observed += 1
        if self.phase is NodePhase.OBSERVING:
            self.phase = NodePhase.PASSIVE
            return False
        if not registered or self.phase is not NodePhase.REGISTERED:
            return False
        if self.queue:
            self.idle_frames = 0
            return False
        self.idle_frames += 1
        if self.sleep_after_idle_frames and self.idle_frames >= self.sleep_after_idle_frames:
            self.phase = NodePhase.PASSIVE
            self.idle_frames = 0
            return True
        return False

    def admit(self) -> None:
        self.phase = NodePhase.REGISTERED
        self.idle_frames = 0


def place_nodes(
    layout: NodeLayout, rng
) -> dict[int, tuple[float, float]]:
    """Coordinates for nodes 1..count.

    ring: evenly spaced on a circle of radius spacing_m. line: spacing_m
    apart on the x axis. random: uniform over a disk of radius spacing_m,
    drawn from ``rng`` in node order.
    """
    positions: dict[int, tuple[float, float]] = {}
    n = layout.count
    for i in range(1, n + 1):
        if layout.placement == "ring":
            angle = 2.0 * math.pi * (i - 1) / n
            positions[i] = (
                layout.spacing_m * math.cos(angle),
                layout.spacing_m * math.sin(angle),
            )
        elif layout.placement == "line":
            positions[i] = ((i - 1) * layout.spacing_m, 0.0)
        else:
            r = layout.spacing_m * math.sqrt(rng.random())
            theta = 2.0 * math.pi * rng.random()
            positions[i] = (r * math.cos(theta), r * math.sin(theta))
    return positions


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def rank_switch_candidates(
    own_vacant: list[int] | tuple[int, ...],
    peer_vacant: list[int] | tuple[int, ...],
    occupancy: dict[int, float],
    pu_duty: dict[int, float],
) -> list[int]:
    """Channels both sides consider vacant, best first.

    Ranked by observed occupancy, then primary-user duty cycle, then
    channel id so the order is total. The negotiating pair walks this
    list, waiting out one listen period per candidate before falling
    back to the next.
    """
    peer = set(peer_vacant)
    common = [ch for ch in own_vacant if ch in peer]
    return sorted(
        common,
        key=lambda ch: (occupancy.get(ch, 0.0), pu_duty.get(ch, 0.0), ch),
    )


def negotiate_channel_switch(
    own_vacant: list[int] | tuple[int, ...],
    peer_vacant: list[int] | tuple[int, ...],
    occupancy: dict[int, float],
    pu_duty: dict[int, float],
) -> int | None:
    """First choice for a coordinated channel switch, or None if none overlap."""
    ranked = rank_switch_candidates(own_vacant, peer_vacant, occupancy, pu_duty)
    return ranked[0] if ranked else None
