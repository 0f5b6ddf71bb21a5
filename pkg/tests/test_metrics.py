import pytest

from dsatmac.metrics import (
    FlowStats,
    MetricsLedger,
    fairness_ratios,
    theoretical_throughput,
)
from dsatmac.timing import FrameTiming

TIMING = FrameTiming.from_ms(superframe=60, quiet=20, control=1, data=1, ack=0.5)


def test_flow_counters_accumulate():
    stats = FlowStats(1, source=1, dest=2)
    stats.record_arrival(4000)
    stats.record_arrival(4000)
    stats.record_delivery(4000, delay_us=80_000)
    assert stats.offered_packets == 2
    assert stats.offered_bytes == 8000
    assert stats.delivered_packets == 1
    assert stats.delivered_bytes == 4000
    assert stats.mean_delay_us == 80_000
    assert stats.delay_max_us == 80_000
    assert stats.throughput_bytes_per_s(2_000_000) == 2000.0


def test_mean_delay_is_none_before_any_delivery():
    assert FlowStats(1, 1, 2).mean_delay_us is None


def test_negative_delay_rejected():
    with pytest.raises(ValueError, match="negative"):
        FlowStats(1, 1, 2).record_delivery(100, -1)


def test_throughput_requires_a_duration():
    with pytest.raises(ValueError, match="positive"):
        FlowStats(1, 1, 2).throughput_bytes_per_s(0)


def test_ledger_flow_registration():
    ledger = MetricsLedger()
    ledger.add_flow(1, 1, 2)
    ledger.add_flow(2, 2, 1)
    with pytest.raises(ValueError, match="duplicate"):
        ledger.add_flow(1, 3, 4)
    assert ledger.flow(2).source == 2


def test_ledger_totals_and_network_throughput():
    ledger = MetricsLedger()
    a = ledger.add_flow(1, 1, 2)
    b = ledger.add_flow(2, 2, 1)
    a.record_delivery(3000, 10)
    b.record_delivery(1000, 30)
    ledger.duration_us = 1_000_000
    assert ledger.delivered_bytes_total == 4000
    assert ledger.network_throughput_bytes_per_s() == 4000.0
    assert ledger.mean_delay_us == 20.0


def test_network_throughput_needs_a_finished_run():
    with pytest.raises(ValueError, match="no duration"):
        MetricsLedger().network_throughput_bytes_per_s()


def test_energy_accumulators_appear_on_first_touch():
    ledger = MetricsLedger()
    ledger.node(4).tx_j += 0.5
    ledger.node(4).rx_j += 0.25
    assert ledger.node(4).total_j == 0.75
    assert ledger.node(9).total_j == 0.0
    assert set(ledger.nodes) == {4, 9}


# ------------------------------------------------------- analytic bound

def test_throughput_bound_hand_value():
    # 60 ms superframe, 20 ms quiet, 6 control slots of 1 ms: a 34 ms
    # data window. 1000 B per 1 ms data slot across a 60 ms cycle.
    got = theoretical_throughput(TIMING, 6, 1000, mode="data-only")
    slots_per_frame = 34_000 / 1_000
    assert got == pytest.approx(slots_per_frame * 1000 / 0.060, rel=1e-12)
    assert got == pytest.approx(566_666.666, rel=1e-6)


def test_ack_mode_prices_the_ack_airtime():
    data_only = theoretical_throughput(TIMING, 6, 1000, mode="data-only")
    with_ack = theoretical_throughput(TIMING, 6, 1000, mode="with-ack")
    assert with_ack == pytest.approx(data_only / 1.5)


def test_bound_decreases_as_the_control_phase_grows():
    values = [theoretical_throughput(TIMING, n, 1000) for n in range(0, 41)]
    assert all(a > b or b == 0.0 for a, b in zip(values, values[1:]))


def test_bound_is_zero_when_control_fills_the_superframe():
    cramped = FrameTiming.from_ms(superframe=30, quiet=20, control=1, data=1, ack=0.5)
    assert theoretical_throughput(cramped, 10, 1000) == 0.0


def test_bound_input_validation():
    with pytest.raises(ValueError, match="mode"):
        theoretical_throughput(TIMING, 2, 1000, mode="raw")
    with pytest.raises(ValueError, match="bytes_per_slot"):
        theoretical_throughput(TIMING, 2, 0)
    with pytest.raises(ValueError, match="outside"):
        theoretical_throughput(TIMING, 41, 1000)


# ------------------------------------------------------------- fairness

def ledger_with_deliveries(**delivered):
    ledger = MetricsLedger()
    for fid, nbytes in delivered.items():
        flow = ledger.add_flow(int(fid), 1, 2 + int(fid))
        if nbytes:
            flow.record_delivery(nbytes, 1)
    return ledger


def test_equal_flows_have_unit_ratios():
    ledger = ledger_with_deliveries(**{"1": 5000, "2": 5000})
    assert fairness_ratios(ledger) == [1.0, 1.0]


def test_ratios_follow_share_of_the_mean():
    ledger = ledger_with_deliveries(**{"1": 4000, "2": 2000})
    assert fairness_ratios(ledger) == pytest.approx([4 / 3, 2 / 3])


def test_ratio_subset_selection():
    ledger = ledger_with_deliveries(**{"1": 4000, "2": 2000, "3": 0})
    assert fairness_ratios(ledger, [1, 2]) == pytest.approx([4 / 3, 2 / 3])


def test_fairness_undefined_cases():
    with pytest.raises(ValueError, match="no flows"):
        fairness_ratios(MetricsLedger())
    with pytest.raises(ValueError, match="ratios undefined"):
        fairness_ratios(ledger_with_deliveries(**{"1": 0}))
