"""Event-driven simulation of the TDMA MAC on a sensed channel.

One superframe, as the kernel runs it:

    quiet period -> sensing verdict -> new-user slot (2 subslots)
    -> one control slot per registered node -> slot allocation
    -> granted data slots, each with its paired ack -> frame close

Frames are content-delimited: the next superframe starts the moment the
last granted ack slot ends, so an idle network cycles quickly and a
full one stretches to the configured budget plus the new-user slot. A
busy sensing verdict abandons the whole cycle and re-senses one detect
interval later; a primary user arriving after an idle verdict is only
noticed by losing the chunks it clobbers, then caught by the next
verdict.

Every node runs the same allocator over the same heard control packets,
so the kernel computes the allocation once and, in checks mode, asserts
that the per-node registry copies never drift from the canonical one.

Determinism: integer-microsecond event times, a fixed tie-break rank
per event kind, and a monotone sequence number make the event order a
pure function of (scenario, seed). Randomness enters only through named
substreams hashed from the seed, never through iteration order.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass
from enum import IntEnum

from dsatmac.energy import required_tx_power
from dsatmac.mac import Node, NodePhase, QueueEntry, distance, place_nodes
from dsatmac.metrics import MetricsLedger
from dsatmac.packets import ack_data_packet, control_packet, data_packet
from dsatmac.pu import PuTrajectory
from dsatmac.registry import CusRegistry
from dsatmac.scenario import FlowSpec, Scenario
from dsatmac.scheduler import SlotAllocation, SlotRequest, compute_ppsa, run_psa
from dsatmac.timing import capacity_max_data_slots, capacity_max_users

MW_TO_W = 1e-3
US_TO_S = 1e-6


def substream(seed: int, name: str) -> random.Random:
    """Independent RNG for one named concern, reproducible from the seed.

    Hashing keeps streams decoupled: adding a node or channel never
    shifts the draws of an existing stream.
    """
    digest = hashlib.sha256(f"{seed}/{name}".encode("ascii")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


class EventKind(IntEnum):
    # rank breaks ties at equal timestamps; receptions complete before
    # the next slot opens so in-flight chunks settle first
    TIMER_EXPIRY = 0
    TRAFFIC_ARRIVAL = 1
    PACKET_RX_COMPLETE = 2
    SLOT_BOUNDARY = 3
    PACKET_TX = 4
    FRAME_BOUNDARY = 5


@dataclass(frozen=True)
class Transmission:
    start_us: int
    end_us: int
    channel: int
    source: int
    dest: int | None    # None: broadcast
    kind: str           # control | nus | data | ack
    power_mw: float


class InvariantError(RuntimeError):
    """A protocol invariant broke mid-run (only raised in checks mode)."""


class Simulation:
    """One seeded run of the TDMA MAC over a single sensed channel."""

    def __init__(
        self,
        scenario: Scenario,
        seed: int,
        *,
        trace: bool = False,
        snapshot_frames: frozenset[int] | set[int] = frozenset(),
    ):
        if scenario.mac != "dsat":
            raise ValueError(f"kernel runs dsat scenarios, got mac={scenario.mac!r}")
        if scenario.sweep is not None:
            raise ValueError("apply the sweep before running (see sweep_points)")
        self.scenario = scenario
        self.seed = seed
        self.timing = scenario.timing
        self.rate = scenario.bytes_per_slot
        self.ledger = MetricsLedger()
        self.snapshot_frames = frozenset(snapshot_frames)
        self.snapshots: dict[int, dict[int, tuple[float, float, float]]] = {}
        self.trace_lines: list[str] | None = [] if trace else None

        horizon = scenario.sim_time_us + 4 * self.timing.superframe_us
        self.trajectory = PuTrajectory(
            scenario.channels[0].pu, substream(seed, "pu:0"), horizon
        )
        self.nus_rng = substream(seed, "nus:0")
        self.positions = place_nodes(scenario.nodes, substream(seed, "placement"))

        capacity = capacity_max_users(self.timing)
        self.nodes: dict[int, Node] = {
            i: Node(i, self.positions[i], capacity,
                    scenario.protocol.sleep_after_idle_frames)
            for i in range(1, scenario.nodes.count + 1)
        }
        self.registry = CusRegistry(capacity)
        if scenario.protocol.eager_join:
            for i in sorted(self.nodes):
                self.registry.append(i, -1)
                self.nodes[i].admit()
                self.nodes[i].frames_observed = 1
            for node in self.nodes.values():
                node.registry = self.registry.copy()

        self.flows: dict[int, FlowSpec] = {}
        for flow in scenario.flows:
            self.flows[flow.flow_id] = flow
            self.ledger.add_flow(flow.flow_id, flow.source, flow.dest)
        for i in self.nodes:
            self.ledger.node(i)

        self.now = 0
        self.frame_index = 0
        self.prev_alloc: SlotAllocation | None = None
        self.allocation_history: list[tuple[int, SlotAllocation]] = []
        self.tx_log: list[Transmission] = []
        self.verdicts: list[tuple[int, int, bool]] = []

        # per-frame working state
        self._members: list[int] = []
        self._requests: dict[int, tuple[int, int]] = {}
        self._nus_draws: list[tuple[int, int]] = []
        self._joiner: int | None = None
        self._alloc = SlotAllocation()
        self._slot_owners: list[int] = []
        self._control_end = 0
        self._frame_data_ok = 0
        self._frame_acks = 0

        self._events: list = []
        self._seq = 0
        for flow in scenario.flows:
            self._schedule(flow.start_us, EventKind.TRAFFIC_ARRIVAL,
                           self._on_arrival, flow.flow_id, 0)
        self._begin_frame(0)

    # --------------------------------------------------------- plumbing

    def _schedule(self, time_us: int, kind: EventKind, fn, *args) -> None:
        heapq.heappush(self._events, (time_us, int(kind), self._seq, fn, args))
        self._seq += 1

    def _trace(self, text: str) -> None:
        if self.trace_lines is not None:
            self.trace_lines.append(f"us={self.now} frame={self.frame_index} {text}")

    def run(self) -> MetricsLedger:
        end = self.scenario.sim_time_us
        while self._events:
            time_us, _, _, fn, args = heapq.heappop(self._events)
            if time_us >= end:
                break
            self.now = time_us
            fn(*args)
        self.ledger.duration_us = end
        return self.ledger

    # ----------------------------------------------------------- energy

    def _power_for_data(self, src: int, dest: int) -> float:
        if not self.scenario.protocol.power_control:
            return self.scenario.radio.tx_power_max_mw
        d = max(1e-9, distance(self.positions[src], self.positions[dest]))
        return required_tx_power(d, self.scenario.radio)

    def _transmit(
        self,
        kind: str,
        src: int,
        dest: int | None,
        airtime_us: int,
        power_mw: float,
        exclude: frozenset[int] = frozenset(),
    ) -> None:
        self.tx_log.append(
            Transmission(self.now, self.now + airtime_us, 0, src, dest, kind, power_mw)
        )
        seconds = airtime_us * US_TO_S
        self.ledger.node(src).tx_j += power_mw * MW_TO_W * seconds
        rx_energy = self.scenario.radio.rx_power_mw * MW_TO_W * seconds
        if self.scenario.protocol.power_control and kind in ("data", "ack"):
            listeners = [dest] if dest is not None else []
        else:
            listeners = [n for n in self.nodes if n != src and n not in exclude]
        for listener in listeners:
            self.ledger.node(listener).rx_j += rx_energy

    # ------------------------------------------------------------ frames

    def _begin_frame(self, t0: int) -> None:
        self._schedule(t0 + self.timing.quiet_us, EventKind.TIMER_EXPIRY,
                       self._on_verdict, t0)

    def _on_verdict(self, t0: int) -> None:
        quiet_end = t0 + self.timing.quiet_us
        busy = self.trajectory.busy_in(t0, quiet_end)
        self.verdicts.append((t0, quiet_end, busy))
        self._trace(f"ev=verdict busy={int(busy)}")
        if busy:
            self.ledger.sensing_busy += 1
            self._schedule(t0 + self.timing.detect_interval_us,
                           EventKind.FRAME_BOUNDARY, self._begin_frame,
                           t0 + self.timing.detect_interval_us)
            return
        self.ledger.sensing_idle += 1
        self._start_control(quiet_end)

    def _start_control(self, nus_start: int) -> None:
        t_c = self.timing.control_us
        self._members = list(self.registry.order)
        self._requests = {}
        self._joiner = None
        self._frame_data_ok = 0
        self._frame_acks = 0

        contenders = [i for i in sorted(self.nodes) if self.nodes[i].is_contender()]
        self._nus_draws = [(self.nus_rng.randrange(2), i) for i in contenders]
        self.ledger.nus_attempts += len(contenders)
        for subslot, node_id in self._nus_draws:
            same = frozenset(
                n for s, n in self._nus_draws if s == subslot and n != node_id
            )
            self._schedule(nus_start + subslot * t_c, EventKind.PACKET_TX,
                           self._tx_nus, node_id, same)

        cus_start = nus_start + self.timing.nus_us
        for index, member in enumerate(self._members):
            self._schedule(cus_start + index * t_c, EventKind.PACKET_TX,
                           self._tx_member_control, member)
        self._control_end = cus_start + len(self._members) * t_c
        self._schedule(self._control_end, EventKind.TIMER_EXPIRY,
                       self._on_control_end)

    def _control_demand(self, node_id: int) -> tuple[int, int]:
        cap = capacity_max_data_slots(self.timing, len(self._members))
        return self.nodes[node_id].control_demand(
            self.now, self.timing.superframe_us, self.rate, cap
        )

    def _tx_nus(self, node_id: int, colliders: frozenset[int]) -> None:
        node = self.nodes[node_id]
        if not node.is_contender():
            return
        pi, requested = self._control_demand(node_id)
        power = self.scenario.radio.tx_power_max_mw
        control_packet(node_id, max(1, round(power)), pi, requested)
        self._transmit("nus", node_id, None, self.timing.control_us, power,
                       exclude=colliders)
        self._requests[node_id] = (pi, requested)
        self._trace(f"ev=tx kind=nus src={node_id} pi={pi} req={requested}")

    def _tx_member_control(self, member: int) -> None:
        node = self.nodes[member]
        if node.phase is not NodePhase.REGISTERED:
            return
        pi, requested = self._control_demand(member)
        power = self.scenario.radio.tx_power_max_mw
        control_packet(member, max(1, round(power)), pi, requested)
        self._transmit("control", member, None, self.timing.control_us, power)
        self.registry.mark_heard(member, self.frame_index)
        for other in self.nodes.values():
            if member in other.registry:
                other.registry.mark_heard(member, self.frame_index)
        if requested > 0:
            self._requests[member] = (pi, requested)
        self._trace(f"ev=tx kind=control src={member} pi={pi} req={requested}")

    def _resolve_nus(self) -> int | None:
        transmitted: dict[int, list[int]] = {}
        for subslot, node_id in self._nus_draws:
            if node_id in self._requests:
                transmitted.setdefault(subslot, []).append(node_id)
        if not transmitted:
            return None
        earliest = min(transmitted)
        occupants = transmitted[earliest]
        if len(occupants) > 1:
            self.ledger.nus_collisions += 1
            self._trace(f"ev=nus-collision subslot={earliest} nodes={occupants}")
            return None
        winner = occupants[0]
        if len(self.registry) >= self.registry.capacity:
            self._trace(f"ev=nus-rejected node={winner} reason=registry-full")
            return None
        return winner

    def _on_control_end(self) -> None:
        self._joiner = self._resolve_nus()
        requesters = sorted(
            node_id for node_id, (_, req) in self._requests.items()
            if req > 0 and (node_id in self.registry or node_id == self._joiner)
        )
        ppsa = compute_ppsa(self.prev_alloc, requesters)
        requests = []
        for node_id in requesters:
            pi, slots = self._requests[node_id]
            requests.append(SlotRequest(node_id, pi, slots, ppsa[node_id]))
        max_slots = capacity_max_data_slots(self.timing, len(self._members))
        alloc = run_psa(requests, max_slots)
        self._alloc = alloc
        self.allocation_history.append((self.frame_index, alloc))
        self.ledger.requests_denied += len(alloc.denied)
        self.ledger.slots_granted += alloc.total_slots

        self._slot_owners = []
        for grant in alloc.grants:
            self._slot_owners.extend([grant.node] * grant.n_slots)
        pair = self.timing.slot_pair_us
        for k in range(len(self._slot_owners)):
            self._schedule(self._control_end + k * pair, EventKind.SLOT_BOUNDARY,
                           self._on_data_slot, k)
        frame_end = self._control_end + len(self._slot_owners) * pair
        self._schedule(frame_end, EventKind.FRAME_BOUNDARY, self._on_frame_end)
        grants_text = ",".join(
            f"{g.node}:{g.first_slot}+{g.n_slots}" for g in alloc.grants
        )
        denied_text = ",".join(str(n) for n in sorted(alloc.denied))
        self._trace(
            f"ev=psa m={max_slots} grants={grants_text or '-'} "
            f"denied={denied_text or '-'}"
        )

    # -------------------------------------------------------- data phase

    def _on_data_slot(self, k: int) -> None:
        owner = self._slot_owners[k]
        node = self.nodes[owner]
        chunk = node.start_chunk(self.rate)
        if chunk is None:
            self._trace(f"ev=slot-idle slot={k} owner={owner}")
            return
        dest = chunk.entry.dest
        power = self._power_for_data(owner, dest)
        data_packet(owner, dest, max(1, round(power)), chunk.nbytes)
        self._transmit("data", owner, dest, self.timing.data_us, power)
        self.ledger.data_packets_tx += 1
        self._schedule(self.now + self.timing.data_us, EventKind.PACKET_RX_COMPLETE,
                       self._on_data_rx, owner, dest, self.now)

    def _on_data_rx(self, owner: int, dest: int, slot_start: int) -> None:
        node = self.nodes[owner]
        if self.trajectory.busy_in(slot_start, slot_start + self.timing.data_us):
            node.abort_chunk()
            self._trace(f"ev=data-lost src={owner} dst={dest}")
            return
        self._frame_data_ok += 1
        power = self._power_for_data(dest, owner)
        ack_data_packet(dest, owner, max(1, round(power)))
        self._transmit("ack", dest, owner, self.timing.ack_us, power)
        self.ledger.acks_tx += 1
        self._frame_acks += 1
        self._schedule(self.now + self.timing.ack_us, EventKind.PACKET_RX_COMPLETE,
                       self._on_ack_rx, owner, self.now)

    def _on_ack_rx(self, owner: int, ack_start: int) -> None:
        node = self.nodes[owner]
        if self.trajectory.busy_in(ack_start, ack_start + self.timing.ack_us):
            node.abort_chunk()
            self._trace(f"ev=ack-lost dst={owner}")
            return
        completed = node.commit_chunk()
        if completed is None:
            return
        delay = self.now - completed.arrival_us
        self.ledger.flow(completed.flow_id).record_delivery(
            completed.total_bytes, delay
        )
        self._trace(
            f"ev=deliver flow={completed.flow_id} bytes={completed.total_bytes} "
            f"delay_us={delay}"
        )
        flow = self.flows[completed.flow_id]
        if flow.interval_us == 0 and (flow.stop_us is None or self.now < flow.stop_us):
            self._enqueue(flow, self.now)

    # ----------------------------------------------------------- traffic

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
        self.nodes[flow.source].enqueue(entry)

    def _on_arrival(self, flow_id: int, k: int) -> None:
        flow = self.flows[flow_id]
        if flow.stop_us is not None and self.now >= flow.stop_us:
            return
        self._enqueue(flow, self.now)
        if flow.interval_us > 0:
            next_us = flow.start_us + (k + 1) * flow.interval_us
            stop = flow.stop_us if flow.stop_us is not None else self.scenario.sim_time_us
            if next_us < stop and next_us < self.scenario.sim_time_us:
                self._schedule(next_us, EventKind.TRAFFIC_ARRIVAL,
                               self._on_arrival, flow_id, k + 1)

    # --------------------------------------------------------- frame end

    def _on_frame_end(self) -> None:
        frame = self.frame_index
        silent = self.registry.silent_members(frame)
        removed = self.registry.heal(silent)
        for node in self.nodes.values():
            node.registry.heal(silent)
        if removed:
            self._trace(f"ev=heal removed={removed}")
        if self._joiner is not None:
            self.registry.append(self._joiner, frame)
            for node in self.nodes.values():
                node.registry.append(self._joiner, frame)
            self.nodes[self._joiner].admit()
            self._trace(f"ev=join node={self._joiner}")
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            left = node.end_frame(registered=node_id in self.registry)
            if left:
                self._trace(f"ev=leave node={node_id}")
        self.prev_alloc = self._alloc
        if self.scenario.protocol.checks:
            self._check_invariants(frame)
        if frame in self.snapshot_frames:
            self.snapshots[frame] = {
                i: (e.tx_j, e.rx_j, e.idle_j)
                for i, e in sorted(self.ledger.nodes.items())
            }
        self.ledger.frames += 1
        self._trace("ev=frame-end")
        self.frame_index += 1
        self._begin_frame(self.now)

    def _check_invariants(self, frame: int) -> None:
        for node_id, node in self.nodes.items():
            if node.registry.order != self.registry.order:
                raise InvariantError(
                    f"frame {frame}: node {node_id} registry "
                    f"{node.registry.order} != canonical {self.registry.order}"
                )
        if self.registry.silent_members(frame):
            raise InvariantError(
                f"frame {frame}: silent members survived healing: "
                f"{self.registry.silent_members(frame)}"
            )
        cursor = 0
        max_slots = capacity_max_data_slots(self.timing, len(self._members))
        for grant in self._alloc.grants:
            if grant.first_slot != cursor or grant.n_slots < 1:
                raise InvariantError(f"frame {frame}: non-contiguous grants")
            cursor += grant.n_slots
        if cursor > max_slots:
            raise InvariantError(
                f"frame {frame}: granted {cursor} slots of {max_slots}"
            )
        if self._frame_acks != self._frame_data_ok:
            raise InvariantError(
                f"frame {frame}: {self._frame_data_ok} clean data receptions "
                f"but {self._frame_acks} acks"
            )


def run_simulation(
    scenario: Scenario,
    seed: int,
    *,
    trace: bool = False,
    snapshot_frames: frozenset[int] | set[int] = frozenset(),
) -> Simulation:
    """Build, run and return the finished simulation for one seed."""
    if scenario.mac == "dsat":
        sim = Simulation(scenario, seed, trace=trace, snapshot_frames=snapshot_frames)
    else:
        from dsatmac.ccc import CccSimulation
        sim = CccSimulation(scenario, seed, trace=trace)
    sim.run()
    return sim
