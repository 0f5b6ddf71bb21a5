"""Distributed slot scheduling.

Every node that heard the same control packets runs the same pure
function over them, so all nodes arrive at the identical slot map
without any extra signalling. Ranking key, from strongest to weakest:

* net priority: declared priority index plus an alternation boost of 5
  for nodes that got nothing in the previous superframe;
* the boost itself (so a starved node outranks an equally-scored served
  one);
* ascending node id, which makes the order total and deterministic.

Slots are handed out contiguously in ranking order. A request that no
longer fits is truncated to whatever remains; once nothing remains,
later requesters are denied outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ALTERNATION_BOOST = 5


@dataclass(frozen=True)
class SlotRequest:
    node: int
    priority_index: int
    slots_requested: int
    ppsa: int  # 0 if the node was granted anything last superframe, else 5

    def __post_init__(self) -> None:
        if not 0 <= self.priority_index <= 21:
            raise ValueError(f"priority index out of range: {self.priority_index}")
        if self.slots_requested < 1:
            raise ValueError(
                f"slots_requested must be >= 1, got {self.slots_requested} "
                "(zero-demand nodes do not enter scheduling)"
            )
        if self.ppsa not in (0, ALTERNATION_BOOST):
            raise ValueError(f"ppsa must be 0 or {ALTERNATION_BOOST}, got {self.ppsa}")

    @property
    def net_priority(self) -> int:
        return self.priority_index + self.ppsa


@dataclass(frozen=True)
class SlotGrant:
    node: int
    first_slot: int
    n_slots: int


@dataclass(frozen=True)
class SlotAllocation:
    grants: tuple[SlotGrant, ...] = field(default_factory=tuple)
    denied: frozenset[int] = field(default_factory=frozenset)

    def granted_nodes(self) -> frozenset[int]:
        return frozenset(g.node for g in self.grants)

    def slots_for(self, node: int) -> int:
        return sum(g.n_slots for g in self.grants if g.node == node)

    @property
    def total_slots(self) -> int:
        return sum(g.n_slots for g in self.grants)


def compute_ppsa(
    previous: SlotAllocation | None, requesters: list[int] | tuple[int, ...]
) -> dict[int, int]:
    """Alternation boost per requester, judged against the last superframe.

    With no previous allocation (first superframe on a channel) every
    requester gets the boost, matching a node that has never been served.
    """
    if previous is None:
        return {node: ALTERNATION_BOOST for node in requesters}
    served = previous.granted_nodes()
    return {
        node: 0 if node in served else ALTERNATION_BOOST for node in requesters
    }


def run_psa(requests: list[SlotRequest] | tuple[SlotRequest, ...], max_slots: int) -> SlotAllocation:
    """Allocate up to ``max_slots`` contiguous data slots across requests.

    Deterministic for any input order: the ranking key is a total order.
    """
    if max_slots < 0:
        raise ValueError(f"max_slots must be >= 0, got {max_slots}")
    seen: set[int] = set()
    for request in requests:
        if request.node in seen:
            raise ValueError(f"duplicate request from node {request.node}")
        seen.add(request.node)

    ranked = sorted(requests, key=lambda r: (-r.net_priority, -r.ppsa, r.node))
    grants: list[SlotGrant] = []
    denied: set[int] = set()
    cursor = 0
    for request in ranked:
        remaining = max_slots - cursor
        if remaining < 1:
            denied.add(request.node)
            continue
        take = min(request.slots_requested, remaining)
        grants.append(SlotGrant(request.node, cursor, take))
        cursor += take
    return SlotAllocation(tuple(grants), frozenset(denied))
