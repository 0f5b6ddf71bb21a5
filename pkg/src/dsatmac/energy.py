"""Radio energy models: path loss, per-superframe budgets, expected savings.

The propagation model is a free-space law with a configurable constant:
``4pi2`` puts 4*pi^2 in the denominator, ``16pi2`` the textbook (4*pi)^2.
Both share the same 1/d^2 shape, so transmit power control scales
quadratically with distance either way.

Per-superframe budgets compare two operating modes for one node in a
steady network of C registered senders sharing D data slots (lam =
D // C slots each per superframe):

* without power control the node transmits everything at maximum power
  and listens to every slot it is not using;
* with power control it transmits data and acks at the minimum power
  that reaches the peer, and sleeps through slots not addressed to it,
  still waking for every control slot.

With peers placed uniformly at random within range R, the mean of the
squared distance is 3R^2/5 for a solid ball and R^2/2 for a disk, which
is what makes the expected transmit saving a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dsatmac.timing import FrameTiming, capacity_max_data_slots

US_TO_S = 1e-6
MW_TO_W = 1e-3

BALL_MEAN_SQUARE = 3.0 / 5.0
DISK_MEAN_SQUARE = 1.0 / 2.0


@dataclass(frozen=True)
class RadioParams:
    tx_power_max_mw: float
    rx_power_mw: float
    gain_tx: float = 1.0
    gain_rx: float = 1.0
    wavelength_m: float = 0.3
    loss_factor: float = 1.0
    range_m: float = 250.0
    friis_form: str = "4pi2"    # "4pi2" or "16pi2" path-loss denominator
    spatial: str = "ball"       # "ball" or "disk" peer placement

    def __post_init__(self) -> None:
        for name in ("tx_power_max_mw", "rx_power_mw", "gain_tx", "gain_rx",
                     "wavelength_m", "loss_factor", "range_m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.friis_form not in ("4pi2", "16pi2"):
            raise ValueError(f"unknown friis_form: {self.friis_form!r}")
        if self.spatial not in ("ball", "disk"):
            raise ValueError(f"unknown spatial model: {self.spatial!r}")

    @property
    def mean_square_fraction(self) -> float:
        return BALL_MEAN_SQUARE if self.spatial == "ball" else DISK_MEAN_SQUARE


def _path_constant(params: RadioParams) -> float:
    if params.friis_form == "4pi2":
        return 4.0 * math.pi**2
    return (4.0 * math.pi) ** 2


def friis_rx_power(tx_power_mw: float, distance_m: float, params: RadioParams) -> float:
    """Received power (mW) at ``distance_m`` for a given transmit power."""
    if tx_power_mw <= 0:
        raise ValueError(f"tx_power must be positive, got {tx_power_mw}")
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return (
        tx_power_mw
        * params.gain_tx
        * params.gain_rx
        * params.wavelength_m**2
        / (_path_constant(params) * distance_m**2 * params.loss_factor)
    )


def required_tx_power(distance_m: float, params: RadioParams) -> float:
    """Minimum transmit power (mW) reaching ``distance_m``.

    Power control keeps the received power at the level a maximum-power
    transmission would deliver at the edge of range, so the requirement
    scales as (d/R)^2 and tops out at the maximum at d = R.
    """
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    if distance_m > params.range_m:
        raise ValueError(
            f"peer at {distance_m} m is beyond range {params.range_m} m"
        )
    return params.tx_power_max_mw * distance_m**2 / params.range_m**2


def slots_per_member(timing: FrameTiming, n_nodes: int) -> int:
    """Data slots each of ``n_nodes`` members gets under an even split."""
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes}")
    return capacity_max_data_slots(timing, n_nodes) // n_nodes


@dataclass(frozen=True)
class EnergyBreakdown:
    n_nodes: int
    data_slots: int           # D: budgeted data slots per superframe
    slots_each: int           # lam = D // n_nodes
    e_without_control_j: float
    e_with_control_expected_j: float
    power_saved_w: float
    frames_per_s: float


def energy_without_power_control(
    timing: FrameTiming, n_nodes: int, params: RadioParams
) -> float:
    """Joules one node spends per superframe at max power with no sleep.

    Transmits its control slot and its lam data slots plus the acks for
    the lam slots it receives; listens to every other control slot and
    every data and ack slot it is not transmitting in.
    """
    d = capacity_max_data_slots(timing, n_nodes)
    lam = d // n_nodes
    p_tx = params.tx_power_max_mw * MW_TO_W
    p_rx = params.rx_power_mw * MW_TO_W
    t_c = timing.control_us * US_TO_S
    t_d = timing.data_us * US_TO_S
    t_a = timing.ack_us * US_TO_S
    tx_time = t_c + lam * t_d + lam * t_a
    rx_time = (n_nodes - 1) * t_c + (d - lam) * t_d + (d - lam) * t_a
    return p_tx * tx_time + p_rx * rx_time


def energy_with_power_control_expected(
    timing: FrameTiming, n_nodes: int, params: RadioParams
) -> float:
    """Expected joules per superframe with power control and sleeping.

    Data and ack transmissions drop to the expected controlled power;
    reception shrinks to the node's own lam slots (plus their acks) and
    every control slot.
    """
    d = capacity_max_data_slots(timing, n_nodes)
    lam = d // n_nodes
    p_tx = params.tx_power_max_mw * MW_TO_W
    p_rx = params.rx_power_mw * MW_TO_W
    p_tx_mean = p_tx * params.mean_square_fraction
    t_c = timing.control_us * US_TO_S
    t_d = timing.data_us * US_TO_S
    t_a = timing.ack_us * US_TO_S
    tx = p_tx * t_c + p_tx_mean * lam * (t_d + t_a)
    rx = p_rx * ((n_nodes - 1) * t_c + lam * (t_d + t_a))
    return tx + rx


def expected_power_saved(
    timing: FrameTiming, n_nodes: int, params: RadioParams
) -> float:
    """Watts saved by power control plus sleeping, averaged over time."""
    d = capacity_max_data_slots(timing, n_nodes)
    lam = d // n_nodes
    xi = 1.0 / (timing.superframe_us * US_TO_S)
    p_tx = params.tx_power_max_mw * MW_TO_W
    p_rx = params.rx_power_mw * MW_TO_W
    pair = (timing.data_us + timing.ack_us) * US_TO_S
    tx_saving = (1.0 - params.mean_square_fraction) * lam * p_tx * pair
    rx_saving = (d - 2 * lam) * p_rx * pair
    return xi * (tx_saving + rx_saving)


def energy_breakdown(
    timing: FrameTiming, n_nodes: int, params: RadioParams
) -> EnergyBreakdown:
    d = capacity_max_data_slots(timing, n_nodes)
    return EnergyBreakdown(
        n_nodes=n_nodes,
        data_slots=d,
        slots_each=d // n_nodes,
        e_without_control_j=energy_without_power_control(timing, n_nodes, params),
        e_with_control_expected_j=energy_with_power_control_expected(timing, n_nodes, params),
        power_saved_w=expected_power_saved(timing, n_nodes, params),
        frames_per_s=1.0 / (timing.superframe_us * US_TO_S),
    )


def sample_peer_distances(
    shape: int | tuple[int, ...], params: RadioParams, rng: np.random.Generator
) -> np.ndarray:
    """Distances of peers placed uniformly at random within range.

    Inverse-CDF sampling: radius ~ R * U^(1/3) for the ball, R * U^(1/2)
    for the disk.
    """
    u = rng.random(shape)
    exponent = 1.0 / 3.0 if params.spatial == "ball" else 0.5
    return params.range_m * u**exponent


def monte_carlo_mean_square_distance(
    n_samples: int, params: RadioParams, seed: int
) -> float:
    """Sample mean of (distance/R)^2 for uniformly placed peers."""
    rng = np.random.default_rng(seed)
    d = sample_peer_distances(n_samples, params, rng)
    return float(np.mean((d / params.range_m) ** 2))


def monte_carlo_power_saved(
    timing: FrameTiming,
    n_nodes: int,
    params: RadioParams,
    n_samples: int,
    seed: int,
) -> float:
    """Per-event Monte-Carlo estimate of the power saved (watts).

    Each sample walks the events of one superframe for one node with
    freshly drawn peer distances: data and ack transmissions are billed
    at the controlled power for their drawn peer, skipped receptions are
    credited at the listening power. The sample mean estimates the same
    quantity as ``expected_power_saved``.
    """
    d = capacity_max_data_slots(timing, n_nodes)
    lam = d // n_nodes
    xi = 1.0 / (timing.superframe_us * US_TO_S)
    p_tx = params.tx_power_max_mw * MW_TO_W
    p_rx = params.rx_power_mw * MW_TO_W
    pair = (timing.data_us + timing.ack_us) * US_TO_S
    rng = np.random.default_rng(seed)

    t_d = timing.data_us * US_TO_S
    t_a = timing.ack_us * US_TO_S
    if lam > 0:
        # one drawn peer distance per transmitted data slot and per sent ack
        dist_data = sample_peer_distances((n_samples, lam), params, rng)
        dist_ack = sample_peer_distances((n_samples, lam), params, rng)
        saved_data = (p_tx - p_tx * (dist_data / params.range_m) ** 2).sum(axis=1) * t_d
        saved_ack = (p_tx - p_tx * (dist_ack / params.range_m) ** 2).sum(axis=1) * t_a
        tx_saving = saved_data + saved_ack
    else:
        tx_saving = np.zeros(n_samples)
    rx_saving = (d - 2 * lam) * p_rx * pair
    return float(np.mean(tx_saving + rx_saving) * xi)
