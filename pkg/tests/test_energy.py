import math

import pytest

from dsatmac.energy import (
    BALL_MEAN_SQUARE,
    DISK_MEAN_SQUARE,
    EnergyBreakdown,
    RadioParams,
    energy_breakdown,
    energy_with_power_control_expected,
    energy_without_power_control,
    expected_power_saved,
    friis_rx_power,
    monte_carlo_mean_square_distance,
    monte_carlo_power_saved,
    required_tx_power,
    sample_peer_distances,
    slots_per_member,
)
from dsatmac.timing import FrameTiming

import numpy as np


RADIO = RadioParams(tx_power_max_mw=1500, rx_power_mw=800)

# ten members, one control slot each, twenty data+ack pairs left over
TIMING = FrameTiming.from_ms(superframe=80, quiet=20, control=1, data=2, ack=0.5)


def test_radio_params_validation():
    with pytest.raises(ValueError, match="positive"):
        RadioParams(tx_power_max_mw=0, rx_power_mw=800)
    with pytest.raises(ValueError, match="friis_form"):
        RadioParams(1500, 800, friis_form="8pi")
    with pytest.raises(ValueError, match="spatial"):
        RadioParams(1500, 800, spatial="cube")


def test_friis_received_power_closed_form():
    params = RadioParams(1500, 800, gain_tx=2.0, gain_rx=1.5,
                         wavelength_m=0.3, loss_factor=1.2)
    got = friis_rx_power(1000.0, 10.0, params)
    expected = 1000.0 * 2.0 * 1.5 * 0.09 / (4 * math.pi**2 * 100.0 * 1.2)
    assert got == pytest.approx(expected)


def test_friis_form_constants_differ_by_four():
    a = friis_rx_power(1000.0, 10.0, RadioParams(1500, 800, friis_form="4pi2"))
    b = friis_rx_power(1000.0, 10.0, RadioParams(1500, 800, friis_form="16pi2"))
    assert a == pytest.approx(4.0 * b)


def test_required_power_scales_with_squared_distance():
    assert required_tx_power(250.0, RADIO) == pytest.approx(1500.0)
    assert required_tx_power(125.0, RADIO) == pytest.approx(375.0)
    assert required_tx_power(25.0, RADIO) == pytest.approx(15.0)
    with pytest.raises(ValueError, match="beyond range"):
        required_tx_power(250.1, RADIO)
    with pytest.raises(ValueError):
        required_tx_power(0.0, RADIO)


def test_slots_per_member_even_split():
    assert slots_per_member(TIMING, 10) == 2
    assert slots_per_member(TIMING, 7) == 3   # 21 data slots, floor share
    with pytest.raises(ValueError):
        slots_per_member(TIMING, 0)


def test_per_superframe_budgets_match_hand_arithmetic():
    # 10 nodes: 20 data slots, 2 each. Full-power mode transmits
    # 1 + 2 + 2 slots' worth and listens to the other 9 + 18 + 18.
    assert energy_without_power_control(TIMING, 10, RADIO) == pytest.approx(0.0522)
    # controlled mode: control at max power, data and acks at the 3/5
    # mean-square fraction, reception only for its own two pairs
    assert energy_with_power_control_expected(TIMING, 10, RADIO) == pytest.approx(0.0172)


def test_expected_saving_hand_value():
    assert expected_power_saved(TIMING, 10, RADIO) == pytest.approx(0.4375)


@pytest.mark.parametrize("n_nodes", [1, 3, 4, 7, 10, 16, 20])
@pytest.mark.parametrize("spatial", ["ball", "disk"])
def test_saving_equals_budget_gap_over_time(n_nodes, spatial):
    """The saved power must equal the difference of the two per-superframe
    budgets spread over one superframe. Catches any drift between the
    three closed forms."""
    params = RadioParams(1500, 800, spatial=spatial)
    gap = (energy_without_power_control(TIMING, n_nodes, params)
           - energy_with_power_control_expected(TIMING, n_nodes, params))
    per_second = gap / (TIMING.superframe_us * 1e-6)
    assert expected_power_saved(TIMING, n_nodes, params) == pytest.approx(per_second)


def test_breakdown_bundles_the_closed_forms():
    b = energy_breakdown(TIMING, 10, RADIO)
    assert isinstance(b, EnergyBreakdown)
    assert (b.n_nodes, b.data_slots, b.slots_each) == (10, 20, 2)
    assert b.e_without_control_j == pytest.approx(0.0522)
    assert b.e_with_control_expected_j == pytest.approx(0.0172)
    assert b.power_saved_w == pytest.approx(0.4375)
    assert b.frames_per_s == pytest.approx(12.5)


def test_sampled_distances_stay_in_range():
    rng = np.random.default_rng(5)
    d = sample_peer_distances((40, 7), RADIO, rng)
    assert d.shape == (40, 7)
    assert np.all(d > 0) and np.all(d <= RADIO.range_m)


def test_ball_and_disk_mean_squares():
    ball = monte_carlo_mean_square_distance(200_000, RADIO, seed=1)
    disk = monte_carlo_mean_square_distance(
        200_000, RadioParams(1500, 800, spatial="disk"), seed=1
    )
    assert ball == pytest.approx(BALL_MEAN_SQUARE, abs=5e-3)
    assert disk == pytest.approx(DISK_MEAN_SQUARE, abs=5e-3)


def test_event_level_estimate_converges_to_the_closed_form():
    got = monte_carlo_power_saved(TIMING, 10, RADIO, n_samples=50_000, seed=9)
    assert got == pytest.approx(0.4375, rel=0.01)


def test_estimate_is_exact_when_members_outnumber_slots():
    # 20 members share 16 data slots: nobody owns a slot under the even
    # split, so the saving is pure sleeping and has no sampling noise.
    got = monte_carlo_power_saved(TIMING, 20, RADIO, n_samples=100, seed=0)
    assert got == pytest.approx(expected_power_saved(TIMING, 20, RADIO), rel=1e-12)
