import pytest
from hypothesis import given, strategies as st

from dsatmac.priority import (
    DataType,
    PriorityInputs,
    priority_index,
    sub_priority_pd,
    sub_priority_ql,
)


@pytest.mark.parametrize("ql,expected", [
    (0, 0), (5, 0),
    (6, 1), (10, 1),
    (11, 2), (20, 2),
    (21, 3), (1000, 3),
])
def test_queue_length_bands(ql, expected):
    assert sub_priority_ql(ql) == expected


@pytest.mark.parametrize("pd,expected", [
    (0, 0), (1, 0),
    (2, 1), (5, 1),
    (6, 2), (10, 2),
    (11, 3), (1000, 3),
])
def test_packet_delay_bands(pd, expected):
    assert sub_priority_pd(pd) == expected


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        sub_priority_ql(-1)
    with pytest.raises(ValueError):
        sub_priority_pd(-1)


def test_lowest_and_highest_composite():
    assert priority_index(PriorityInputs(DataType.TEXT_FILE, 0, 0)) == 0
    assert priority_index(PriorityInputs(DataType.SAFETY_CRITICAL, 21, 11)) == 21


def test_data_type_dominates():
    # one step of data type outweighs a maxed queue band
    low = priority_index(PriorityInputs(DataType.TEXT_FILE, 1000, 0))
    high = priority_index(PriorityInputs(DataType.REALTIME_AV, 0, 0))
    assert low == high == 3


def test_delay_and_queue_weights():
    # delay bands are worth three queue bands
    assert priority_index(PriorityInputs(DataType.TEXT_FILE, 0, 2)) == 3
    assert priority_index(PriorityInputs(DataType.TEXT_FILE, 6, 0)) == 1
    assert priority_index(PriorityInputs(DataType.CONTROL_DATA, 12, 7)) == 6 + 2 + 6


@given(
    dt=st.sampled_from(DataType),
    ql=st.integers(min_value=0, max_value=200),
    pd=st.integers(min_value=0, max_value=50),
)
def test_index_stays_in_range_and_is_monotone(dt, ql, pd):
    base = priority_index(PriorityInputs(dt, ql, pd))
    assert 0 <= base <= 21
    assert priority_index(PriorityInputs(dt, ql + 1, pd)) >= base
    assert priority_index(PriorityInputs(dt, ql, pd + 1)) >= base
