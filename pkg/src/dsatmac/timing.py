"""Superframe timing arithmetic.

All durations are integer microseconds. Scenario files speak in
milliseconds; the parser converts once, so every event in a run sits on
an exact microsecond grid and no float time ever accumulates.

A superframe is laid out as

    [quiet period][new-user slot][control slots x N][data+ack slots x M]

where the new-user slot is always twice one control slot. The slot
budget M is bounded so that quiet period, control slots and data slots
fit the configured superframe length; each data slot drags its ack slot
along as a fixed pair.
"""

from __future__ import annotations

from dataclasses import dataclass

US_PER_MS = 1000


def ms_to_us(value: float) -> int:
    """Convert a millisecond value to integer microseconds."""
    return round(value * US_PER_MS)


def us_to_ms(value: int) -> float:
    return value / US_PER_MS


@dataclass(frozen=True)
class FrameTiming:
    """Durations shaping one superframe, in microseconds.

    ``superframe_us`` is the planning budget for a whole cycle,
    ``quiet_us`` the sensing window at its head, ``control_us`` one
    control slot, ``data_us`` one data slot, ``ack_us`` the ack slot
    paired with every data slot, ``wait_us`` how long a node lingers on
    a busy target channel before trying the next candidate, and
    ``detect_interval_us`` the re-sensing period while a primary user
    holds the channel.
    """

    superframe_us: int
    quiet_us: int
    control_us: int
    data_us: int
    ack_us: int
    wait_us: int
    detect_interval_us: int

    def __post_init__(self) -> None:
        for name in (
            "superframe_us",
            "quiet_us",
            "control_us",
            "data_us",
            "ack_us",
            "wait_us",
            "detect_interval_us",
        ):
            value = getattr(self, name)
            if not isinstance(value, int):
                raise ValueError(f"{name} must be an integer microsecond count, got {value!r}")
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.quiet_us + self.control_us > self.superframe_us:
            raise ValueError(
                "superframe too short: quiet period plus one control slot "
                f"({self.quiet_us} + {self.control_us} us) exceeds {self.superframe_us} us"
            )

    @classmethod
    def from_ms(
        cls,
        superframe: float,
        quiet: float,
        control: float,
        data: float,
        ack: float,
        wait: float = 5.0,
        detect_interval: float | None = None,
    ) -> "FrameTiming":
        if detect_interval is None:
            detect_interval = superframe
        return cls(
            superframe_us=ms_to_us(superframe),
            quiet_us=ms_to_us(quiet),
            control_us=ms_to_us(control),
            data_us=ms_to_us(data),
            ack_us=ms_to_us(ack),
            wait_us=ms_to_us(wait),
            detect_interval_us=ms_to_us(detect_interval),
        )

    @property
    def nus_us(self) -> int:
        """Width of the new-user slot: always two control slots."""
        return 2 * self.control_us

    @property
    def slot_pair_us(self) -> int:
        """One data slot plus its paired ack slot."""
        return self.data_us + self.ack_us


def capacity_max_users(timing: FrameTiming) -> int:
    """Largest number of control slots that fit after the quiet period.

    This is the registration ceiling for one channel: a joiner that
    observes this many occupied control slots moves on.
    """
    return (timing.superframe_us - timing.quiet_us) // timing.control_us


def capacity_max_data_slots(timing: FrameTiming, n_users: int) -> int:
    """Largest data slot count that fits alongside ``n_users`` control slots.

    Every data slot is paired with an ack slot, so the per-slot cost is
    ``data_us + ack_us``. Returns 0 when the control phase already fills
    the budget.
    """
    if n_users < 0:
        raise ValueError(f"n_users must be >= 0, got {n_users}")
    if n_users > capacity_max_users(timing):
        raise ValueError(
            f"n_users {n_users} exceeds channel capacity {capacity_max_users(timing)}"
        )
    free = timing.superframe_us - timing.quiet_us - n_users * timing.control_us
    return max(0, free // timing.slot_pair_us)
