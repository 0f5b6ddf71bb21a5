"""Slot-scheduled TDMA MAC simulator for cognitive radio networks.

The package has three layers:

* pure protocol arithmetic: frame timing, packet codec, priority index,
  slot scheduling, energy models;
* a deterministic discrete-event kernel driving per-node MAC state
  machines, plus a CSMA/RTS-CTS baseline MAC on a dedicated control
  channel;
* a scenario file format, an experiment driver that sweeps parameters
  into CSV rows, and figure rendering for reports.
"""

from dsatmac.timing import FrameTiming, capacity_max_users, capacity_max_data_slots
from dsatmac.priority import DataType, PriorityInputs, priority_index
from dsatmac.scheduler import SlotRequest, SlotGrant, SlotAllocation, compute_ppsa, run_psa
from dsatmac.energy import RadioParams, EnergyBreakdown, friis_rx_power, required_tx_power
from dsatmac.metrics import MetricsLedger, theoretical_throughput, fairness_ratios
from dsatmac.scenario import (
    Scenario,
    ScenarioError,
    apply_sweep,
    load_scenario,
    parse_scenario,
    serialize_scenario,
    sweep_points,
)
from dsatmac.kernel import InvariantError, Simulation, run_simulation, substream
from dsatmac.ccc import CccSimulation
from dsatmac.experiment import RunResult, run_experiment, write_csv

__version__ = "0.1.0"

__all__ = [
    "FrameTiming",
    "capacity_max_users",
    "capacity_max_data_slots",
    "DataType",
    "PriorityInputs",
    "priority_index",
    "SlotRequest",
    "SlotGrant",
    "SlotAllocation",
    "compute_ppsa",
    "run_psa",
    "RadioParams",
    "EnergyBreakdown",
    "friis_rx_power",
    "required_tx_power",
    "MetricsLedger",
    "theoretical_throughput",
    "fairness_ratios",
    "Scenario",
    "ScenarioError",
    "apply_sweep",
    "load_scenario",
    "parse_scenario",
    "serialize_scenario",
    "sweep_points",
    "InvariantError",
    "Simulation",
    "run_simulation",
    "substream",
    "CccSimulation",
    "RunResult",
    "run_experiment",
    "write_csv",
]
