"""Control-slot registry: who owns which control slot on a channel.

Each node keeps its own copy and updates it from the control packets it
hears, so the registry is a distributed structure that must stay
identical across nodes. Slot positions are list indices; healing removes
silent members and shifts the survivors down, keeping occupied slots
contiguous from slot 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CusRegistry:
    capacity: int
    order: list[int] = field(default_factory=list)
    last_heard: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, node: int) -> bool:
        return node in self.last_heard

    def index_of(self, node: int) -> int:
        return self.order.index(node)

    def append(self, node: int, frame: int) -> int:
        """Register ``node`` in the next vacant control slot."""
        if node in self.last_heard:
            raise ValueError(f"node {node} already registered")
        if len(self.order) >= self.capacity:
            raise ValueError(f"registry full ({self.capacity} slots)")
        self.order.append(node)
        self.last_heard[node] = frame
        return len(self.order) - 1

    def mark_heard(self, node: int, frame: int) -> None:
        if node not in self.last_heard:
            raise ValueError(f"node {node} not registered")
        self.last_heard[node] = frame

    def silent_members(self, frame: int) -> list[int]:
        """Members that did not speak in ``frame``, in slot order."""
        return [n for n in self.order if self.last_heard[n] < frame]

    def heal(self, silent: list[int] | set[int]) -> list[int]:
        """Drop silent members; survivors shift down preserving order.

        Returns the removed nodes in their old slot order.
        """
        removed = [n for n in self.order if n in silent]
        if removed:
            self.order = [n for n in self.order if n not in silent]
            for node in removed:
                del self.last_heard[node]
        return removed

    def copy(self) -> "CusRegistry":
        return CusRegistry(self.capacity, list(self.order), dict(self.last_heard))
