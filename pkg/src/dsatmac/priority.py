"""Priority index computed from traffic class, backlog and head-of-line age.

Three sub-priorities are banded into 0..3 and combined as

    PI = 3 * data_type + queue_length_band + 3 * delay_band

giving a range of 0..21. Band edges always round down: a value sitting
exactly on an edge belongs to the lower band.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class DataType(enum.IntEnum):
    """Traffic classes in increasing urgency. The band is the enum value."""

    TEXT_FILE = 0
    REALTIME_AV = 1
    CONTROL_DATA = 2
    SAFETY_CRITICAL = 3


@dataclass(frozen=True)
class PriorityInputs:
    data_type: DataType
    queue_length: int        # packets waiting, including the head
    head_delay_frames: int   # whole superframes the head packet has waited

    def __post_init__(self) -> None:
        if self.queue_length < 0:
            raise ValueError(f"queue_length must be >= 0, got {self.queue_length}")
        if self.head_delay_frames < 0:
            raise ValueError(f"head_delay_frames must be >= 0, got {self.head_delay_frames}")


def sub_priority_dt(data_type: DataType) -> int:
    return int(data_type)


def sub_priority_ql(queue_length: int) -> int:
    if queue_length < 0:
        raise ValueError(f"queue_length must be >= 0, got {queue_length}")
    if queue_length <= 5:
        return 0
    if queue_length <= 10:
        return 1
    if queue_length <= 20:
        return 2
    return 3


def sub_priority_pd(head_delay_frames: int) -> int:
    if head_delay_frames < 0:
        raise ValueError(f"head_delay_frames must be >= 0, got {head_delay_frames}")
    if head_delay_frames < 2:
        return 0
    if head_delay_frames <= 5:
        return 1
    if head_delay_frames <= 10:
        return 2
    return 3


def priority_index(inputs: PriorityInputs) -> int:
    """Weighted combination of the three sub-priorities, in 0..21."""
    return (
        3 * sub_priority_dt(inputs.data_type)
        + sub_priority_ql(inputs.queue_length)
        + 3 * sub_priority_pd(inputs.head_delay_frames)
    )
