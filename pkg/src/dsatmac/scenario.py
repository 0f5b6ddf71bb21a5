"""Scenario files: a line-oriented `key = value` format with [section] headers.

A scenario fully determines one experiment: MAC flavor, frame timing,
radio constants, channel occupancy models, node layout, traffic flows,
and an optional one-parameter sweep. Blank lines and lines starting
with `#` or `;` are ignored. Sections:

    [scenario]    name, mac (dsat|ccc), sim_time_ms, seed, replications
    [timing]      superframe_ms, quiet_ms, control_ms, data_ms, ack_ms,
                  wait_ms, detect_interval_ms
    [radio]       bytes_per_slot, tx_power_mw, rx_power_mw, range_m,
                  wavelength_m, gain_tx, gain_rx, loss_factor,
                  friis_constant (4pi2|16pi2), spatial (ball|disk)
    [protocol]    sleep_after_idle_frames (0 = never sleep), eager_join,
                  power_control, checks
    [channel N]   pu = idle | markov | scripted, plus model fields
    [nodes]       count, placement (ring|line|random), spacing_m
    [flow N]      source, dest, packet_bytes, interval_ms (0 = saturated),
                  start_ms, stop_ms, data_type, pi_override
    [sweep]       parameter, values
    [ccc]         cw_min, cw_max, slot_ms, rts_ms, cts_ms, ack_ms,
                  sifs_ms, difs_ms

Parse errors carry the offending line number. parse -> serialize ->
parse is the identity on the parsed object.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from dsatmac.energy import RadioParams
from dsatmac.priority import DataType
from dsatmac.pu import PuIdle, PuMarkov, PuModel, PuScripted
from dsatmac.timing import FrameTiming, ms_to_us, us_to_ms

SWEEP_PARAMETERS = ("quiet_ms", "superframe_ms", "pu_duty", "flow_count", "node_count")

_DATA_TYPE_NAMES = {
    "text": DataType.TEXT_FILE,
    "realtime": DataType.REALTIME_AV,
    "control": DataType.CONTROL_DATA,
    "safety": DataType.SAFETY_CRITICAL,
}
_DATA_TYPE_LABELS = {v: k for k, v in _DATA_TYPE_NAMES.items()}


class ScenarioError(ValueError):
    """Parse or validation failure, with the source line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ChannelSpec:
    channel_id: int
    pu: PuModel = field(default_factory=PuIdle)


@dataclass(frozen=True)
class NodeLayout:
    count: int
    placement: str = "ring"     # ring | line | random
    spacing_m: float = 100.0

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"node count must be >= 1, got {self.count}")
        if self.placement not in ("ring", "line", "random"):
            raise ValueError(f"unknown placement {self.placement!r}")
        if self.spacing_m <= 0:
            raise ValueError(f"spacing_m must be positive, got {self.spacing_m}")


@dataclass(frozen=True)
class FlowSpec:
    flow_id: int
    source: int
    dest: int
    packet_bytes: int
    interval_us: int = 0        # 0: saturated (refill on every dequeue)
    start_us: int = 0
    stop_us: int | None = None
    data_type: DataType = DataType.TEXT_FILE
    pi_override: int | None = None

    def __post_init__(self) -> None:
        if self.source == self.dest:
            raise ValueError(f"flow {self.flow_id}: source equals dest")
        if not 1 <= self.packet_bytes <= 0xFFFF:
            raise ValueError(
                f"flow {self.flow_id}: packet_bytes must be 1..65535"
            )
        if self.interval_us < 0 or self.start_us < 0:
            raise ValueError(f"flow {self.flow_id}: negative time")
        if self.stop_us is not None and self.stop_us <= self.start_us:
            raise ValueError(f"flow {self.flow_id}: stop must be after start")
        if self.pi_override is not None and not 0 <= self.pi_override <= 21:
            raise ValueError(f"flow {self.flow_id}: pi_override must be 0..21")


@dataclass(frozen=True)
class ProtocolParams:
    sleep_after_idle_frames: int = 3    # 0 disables sleeping
    eager_join: bool = False            # everyone registered at t=0
    power_control: bool = False
    checks: bool = False                # invariant assertions each superframe

    def __post_init__(self) -> None:
        if self.sleep_after_idle_frames < 0:
            raise ValueError("sleep_after_idle_frames must be >= 0")


@dataclass(frozen=True)
class CccParams:
    # labeled defaults in the 802.11 style, not calibrated to any radio
    cw_min: int = 8
    cw_max: int = 256
    slot_us: int = 20
    rts_us: int = 160
    cts_us: int = 140
    ack_us: int = 140
    sifs_us: int = 10
    difs_us: int = 50

    def __post_init__(self) -> None:
        if not 1 <= self.cw_min <= self.cw_max:
            raise ValueError("need 1 <= cw_min <= cw_max")
        for name in ("slot_us", "rts_us", "cts_us", "ack_us", "sifs_us", "difs_us"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...] | tuple[int, ...]

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(
                f"sweep parameter must be one of {SWEEP_PARAMETERS}, "
                f"got {self.parameter!r}"
            )
        if not self.values:
            raise ValueError("sweep needs at least one value")


@dataclass(frozen=True)
class Scenario:
    name: str
    mac: str                    # "dsat" | "ccc"
    sim_time_us: int
    seed: int
    timing: FrameTiming
    radio: RadioParams
    bytes_per_slot: int         # payload bytes one data slot carries
    nodes: NodeLayout
    flows: tuple[FlowSpec, ...]
    channels: tuple[ChannelSpec, ...] = (ChannelSpec(0),)
    protocol: ProtocolParams = ProtocolParams()
    replications: int = 5
    sweep: SweepSpec | None = None
    ccc: CccParams | None = None

    def __post_init__(self) -> None:
        if self.mac not in ("dsat", "ccc"):
            raise ValueError(f"mac must be dsat or ccc, got {self.mac!r}")
        if self.sim_time_us <= 0:
            raise ValueError("sim_time_ms must be positive")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.bytes_per_slot < 1:
            raise ValueError("bytes_per_slot must be >= 1")

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(self.seed + i for i in range(self.replications))

    def channel(self, channel_id: int) -> ChannelSpec:
        for spec in self.channels:
            if spec.channel_id == channel_id:
                return spec
        raise KeyError(channel_id)


def _check_cross_refs(scenario: Scenario) -> None:
    ids = [c.channel_id for c in scenario.channels]
    if ids != list(range(len(ids))):
        raise ScenarioError(f"channel ids must be 0..{len(ids) - 1}, got {ids}")
    if scenario.mac == "ccc" and len(ids) != 2:
        raise ScenarioError(
            f"ccc mode needs exactly 2 channels (control + data), got {len(ids)}"
        )
    if scenario.mac == "dsat" and len(ids) < 1:
        raise ScenarioError("dsat mode needs at least one channel")
    if scenario.ccc is not None and scenario.mac != "ccc":
        raise ScenarioError("[ccc] section only applies when mac = ccc")
    seen = set()
    for flow in scenario.flows:
        if flow.flow_id in seen:
            raise ScenarioError(f"duplicate flow id {flow.flow_id}")
        seen.add(flow.flow_id)
        for endpoint in (flow.source, flow.dest):
            if not 1 <= endpoint <= scenario.nodes.count:
                raise ScenarioError(
                    f"flow {flow.flow_id} references node {endpoint}, "
                    f"but nodes are 1..{scenario.nodes.count}"
                )
    if scenario.sweep is not None:
        _check_sweep(scenario)


def _check_sweep(scenario: Scenario) -> None:
    sweep = scenario.sweep
    assert sweep is not None
    for value in sweep.values:
        if sweep.parameter in ("quiet_ms", "superframe_ms"):
            try:
                apply_sweep(scenario, value)
            except ValueError as exc:
                raise ScenarioError(
                    f"sweep value {value} makes timing invalid: {exc}"
                ) from exc
        elif sweep.parameter == "pu_duty":
            if not 0 <= value < 1:
                raise ScenarioError(f"pu_duty {value} outside [0, 1)")
            if not any(isinstance(c.pu, PuMarkov) for c in scenario.channels):
                raise ScenarioError(
                    "pu_duty sweep needs at least one markov channel"
                )
        elif sweep.parameter == "flow_count":
            if not 1 <= value <= len(scenario.flows):
                raise ScenarioError(
                    f"flow_count {value} outside 1..{len(scenario.flows)}"
                )
        elif sweep.parameter == "node_count":
            if not 1 <= value <= scenario.nodes.count:
                raise ScenarioError(
                    f"node_count {value} outside 1..{scenario.nodes.count}"
                )


def apply_sweep(scenario: Scenario, value: float | int) -> Scenario:
    """One sweep point: the scenario with the swept parameter set to ``value``.

    The result has its sweep cleared, so it runs as a plain scenario.
    """
    if scenario.sweep is None:
        raise ValueError("scenario has no sweep")
    parameter = scenario.sweep.parameter
    out = dataclasses.replace(scenario, sweep=None)
    if parameter == "quiet_ms":
        timing = dataclasses.replace(out.timing, quiet_us=ms_to_us(value))
        return dataclasses.replace(out, timing=timing)
    if parameter == "superframe_ms":
        new_us = ms_to_us(value)
        detect = out.timing.detect_interval_us
        if detect == out.timing.superframe_us:
            detect = new_us     # tracks the superframe unless set apart
        timing = dataclasses.replace(
            out.timing, superframe_us=new_us, detect_interval_us=detect
        )
        return dataclasses.replace(out, timing=timing)
    if parameter == "pu_duty":
        channels = []
        for spec in out.channels:
            if isinstance(spec.pu, PuMarkov):
                cycle = spec.pu.mean_on_us + spec.pu.mean_off_us
                channels.append(dataclasses.replace(spec, pu=_markov(value, cycle)))
            else:
                channels.append(spec)
        return dataclasses.replace(out, channels=tuple(channels))
    if parameter == "flow_count":
        return dataclasses.replace(out, flows=out.flows[: int(value)])
    if parameter == "node_count":
        count = int(value)
        nodes = dataclasses.replace(out.nodes, count=count)
        flows = tuple(
            f for f in out.flows if f.source <= count and f.dest <= count
        )
        return dataclasses.replace(out, nodes=nodes, flows=flows)
    raise ValueError(f"unknown sweep parameter {parameter!r}")


def sweep_points(scenario: Scenario) -> list[tuple[float | int | None, Scenario]]:
    """(value, concrete scenario) pairs; a single (None, self) without a sweep."""
    if scenario.sweep is None:
        return [(None, scenario)]
    return [(v, apply_sweep(scenario, v)) for v in scenario.sweep.values]


def _markov(duty: float, cycle_us: float) -> PuModel:
    if duty == 0:
        return PuIdle()
    return PuMarkov(
        mean_on_us=max(1, round(duty * cycle_us)),
        mean_off_us=max(1, round((1 - duty) * cycle_us)),
    )


# ---------------------------------------------------------------- parsing

def _split_sections(text: str) -> dict[tuple[str, int | None], dict[str, tuple[str, int]]]:
    sections: dict[tuple[str, int | None], dict[str, tuple[str, int]]] = {}
    current: dict[str, tuple[str, int]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("unterminated section header", lineno)
            parts = line[1:-1].split()
            if len(parts) == 1:
                key: tuple[str, int | None] = (parts[0].lower(), None)
            elif len(parts) == 2:
                try:
                    key = (parts[0].lower(), int(parts[1]))
                except ValueError:
                    raise ScenarioError(
                        f"section index must be an integer: {parts[1]!r}", lineno
                    ) from None
            else:
                raise ScenarioError(f"malformed section header {line!r}", lineno)
            if key in sections:
                raise ScenarioError(f"duplicate section {line}", lineno)
            current = {}
            sections[key] = current
            continue
        if "=" not in line:
            raise ScenarioError(f"expected key = value, got {line!r}", lineno)
        if current is None:
            raise ScenarioError("key outside any [section]", lineno)
        name, _, value = line.partition("=")
        name = name.strip().lower()
        if name in current:
            raise ScenarioError(f"duplicate key {name!r}", lineno)
        current[name] = (value.strip(), lineno)
    return sections


class _Section:
    """One parsed section; converts values and tracks which keys were read."""

    def __init__(self, name: str, data: dict[str, tuple[str, int]]):
        self.name = name
        self.data = data
        self.read: set[str] = set()

    def _raw(self, key: str) -> tuple[str, int] | None:
        entry = self.data.get(key)
        if entry is not None:
            self.read.add(key)
        return entry

    def get(self, key: str, conv, default=None, required: bool = False):
        entry = self._raw(key)
        if entry is None:
            if required:
                raise ScenarioError(f"[{self.name}] is missing key {key!r}")
            return default
        value, lineno = entry
        try:
            return conv(value)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"{key}: {exc}", lineno) from None

    def check_unknown(self) -> None:
        for key, (_, lineno) in self.data.items():
            if key not in self.read:
                raise ScenarioError(
                    f"unknown key {key!r} in [{self.name}]", lineno
                )


def _int(value: str) -> int:
    return int(value, 10)


def _bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _ms(value: str) -> int:
    us = ms_to_us(float(value))
    if us < 0:
        raise ValueError(f"negative duration {value!r}")
    return us


def _choice(*allowed: str):
    def conv(value: str) -> str:
        lowered = value.lower()
        if lowered not in allowed:
            raise ValueError(f"expected one of {allowed}, got {value!r}")
        return lowered
    return conv


def _data_type(value: str) -> DataType:
    lowered = value.lower()
    if lowered not in _DATA_TYPE_NAMES:
        raise ValueError(
            f"expected one of {tuple(_DATA_TYPE_NAMES)}, got {value!r}"
        )
    return _DATA_TYPE_NAMES[lowered]


def _busy_ranges(value: str) -> tuple[tuple[int, int], ...]:
    ranges = []
    for part in value.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        if not sep:
            raise ValueError(f"expected start-end, got {part!r}")
        ranges.append((ms_to_us(float(lo)), ms_to_us(float(hi))))
    if not ranges:
        raise ValueError("empty busy list")
    return tuple(ranges)


def _build(factory, *args, **kwargs):
    """Construct a config dataclass, lifting its ValueError to ScenarioError."""
    try:
        return factory(*args, **kwargs)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def parse_scenario(text: str) -> Scenario:
    sections = _split_sections(text)
    seen: set[tuple[str, int | None]] = set()

    def take(name: str, index: int | None = None, required: bool = False) -> _Section | None:
        key = (name, index)
        seen.add(key)
        if key not in sections:
            if required:
                raise ScenarioError(f"missing required section [{name}]")
            return None
        label = name if index is None else f"{name} {index}"
        return _Section(label, sections[key])

    header = take("scenario", required=True)
    assert header is not None
    name = header.get("name", str, required=True)
    mac = header.get("mac", _choice("dsat", "ccc"), default="dsat")
    sim_time_us = header.get("sim_time_ms", _ms, required=True)
    seed = header.get("seed", _int, default=1)
    replications = header.get("replications", _int, default=5)

    timing_sec = take("timing", required=True)
    assert timing_sec is not None
    superframe_us = timing_sec.get("superframe_ms", _ms, required=True)
    timing_kwargs = dict(
        superframe_us=superframe_us,
        quiet_us=timing_sec.get("quiet_ms", _ms, required=True),
        control_us=timing_sec.get("control_ms", _ms, required=True),
        data_us=timing_sec.get("data_ms", _ms, required=True),
        ack_us=timing_sec.get("ack_ms", _ms, required=True),
        wait_us=timing_sec.get("wait_ms", _ms, default=ms_to_us(5.0)),
        detect_interval_us=timing_sec.get(
            "detect_interval_ms", _ms, default=superframe_us
        ),
    )

    radio_sec = take("radio", required=True)
    assert radio_sec is not None
    bytes_per_slot = radio_sec.get("bytes_per_slot", _int, required=True)
    radio_kwargs = dict(
        tx_power_max_mw=radio_sec.get("tx_power_mw", float, default=1500.0),
        rx_power_mw=radio_sec.get("rx_power_mw", float, default=800.0),
        gain_tx=radio_sec.get("gain_tx", float, default=1.0),
        gain_rx=radio_sec.get("gain_rx", float, default=1.0),
        wavelength_m=radio_sec.get("wavelength_m", float, default=0.3),
        loss_factor=radio_sec.get("loss_factor", float, default=1.0),
        range_m=radio_sec.get("range_m", float, default=250.0),
        friis_form=radio_sec.get(
            "friis_constant", _choice("4pi2", "16pi2"), default="4pi2"
        ),
        spatial=radio_sec.get("spatial", _choice("ball", "disk"), default="ball"),
    )

    protocol_sec = take("protocol")
    if protocol_sec is None:
        protocol = ProtocolParams()
    else:
        protocol = _build(
            ProtocolParams,
            sleep_after_idle_frames=protocol_sec.get(
                "sleep_after_idle_frames", _int, default=3
            ),
            eager_join=protocol_sec.get("eager_join", _bool, default=False),
            power_control=protocol_sec.get("power_control", _bool, default=False),
            checks=protocol_sec.get("checks", _bool, default=False),
        )
        protocol_sec.check_unknown()

    nodes_sec = take("nodes", required=True)
    assert nodes_sec is not None
    nodes = _build(
        NodeLayout,
        count=nodes_sec.get("count", _int, required=True),
        placement=nodes_sec.get(
            "placement", _choice("ring", "line", "random"), default="ring"
        ),
        spacing_m=nodes_sec.get("spacing_m", float, default=100.0),
    )
    nodes_sec.check_unknown()

    channel_ids = sorted(
        idx for (sec, idx) in sections if sec == "channel" and idx is not None
    )
    channels = []
    for channel_id in channel_ids:
        sec = take("channel", channel_id)
        assert sec is not None
        kind = sec.get("pu", _choice("idle", "markov", "scripted"), default="idle")
        if kind == "idle":
            pu: PuModel = PuIdle()
        elif kind == "markov":
            duty = sec.get("duty", float, required=True)
            cycle_us = sec.get("cycle_ms", _ms, default=ms_to_us(200.0))
            if not 0 <= duty < 1:
                raise ScenarioError(f"channel {channel_id}: duty outside [0, 1)")
            pu = _markov(duty, cycle_us)
        else:
            pu = _build(PuScripted, sec.get("busy_ms", _busy_ranges, required=True))
        channels.append(ChannelSpec(channel_id, pu))
        sec.check_unknown()
    if not channels:
        channels = [ChannelSpec(0)]

    flow_ids = sorted(
        idx for (sec, idx) in sections if sec == "flow" and idx is not None
    )
    flows = []
    for flow_id in flow_ids:
        sec = take("flow", flow_id)
        assert sec is not None
        flows.append(
            _build(
                FlowSpec,
                flow_id=flow_id,
                source=sec.get("source", _int, required=True),
                dest=sec.get("dest", _int, required=True),
                packet_bytes=sec.get("packet_bytes", _int, required=True),
                interval_us=sec.get("interval_ms", _ms, default=0),
                start_us=sec.get("start_ms", _ms, default=0),
                stop_us=sec.get("stop_ms", _ms, default=None),
                data_type=sec.get("data_type", _data_type, default=DataType.TEXT_FILE),
                pi_override=sec.get("pi_override", _int, default=None),
            )
        )
        sec.check_unknown()

    sweep_sec = take("sweep")
    sweep = None
    if sweep_sec is not None:
        parameter = sweep_sec.get("parameter", _choice(*SWEEP_PARAMETERS), required=True)
        number = _int if parameter in ("flow_count", "node_count") else float
        raw = sweep_sec.get("values", str, required=True)
        try:
            values = tuple(number(v.strip()) for v in raw.split(",") if v.strip())
        except ValueError as exc:
            raise ScenarioError(f"sweep values: {exc}") from None
        sweep = _build(SweepSpec, parameter, values)
        sweep_sec.check_unknown()

    ccc_sec = take("ccc")
    ccc = None
    if ccc_sec is not None:
        ccc = _build(
            CccParams,
            cw_min=ccc_sec.get("cw_min", _int, default=8),
            cw_max=ccc_sec.get("cw_max", _int, default=256),
            slot_us=ccc_sec.get("slot_ms", _ms, default=20),
            rts_us=ccc_sec.get("rts_ms", _ms, default=160),
            cts_us=ccc_sec.get("cts_ms", _ms, default=140),
            ack_us=ccc_sec.get("ack_ms", _ms, default=140),
            sifs_us=ccc_sec.get("sifs_ms", _ms, default=10),
            difs_us=ccc_sec.get("difs_ms", _ms, default=50),
        )
        ccc_sec.check_unknown()
    elif mac == "ccc":
        ccc = CccParams()

    for key in sections:
        if key not in seen:
            label = key[0] if key[1] is None else f"{key[0]} {key[1]}"
            raise ScenarioError(f"unknown section [{label}]")

    header.check_unknown()
    timing_sec.check_unknown()
    radio_sec.check_unknown()

    try:
        scenario = Scenario(
            name=name,
            mac=mac,
            sim_time_us=sim_time_us,
            seed=seed,
            replications=replications,
            timing=FrameTiming(**timing_kwargs),
            radio=RadioParams(**radio_kwargs),
            bytes_per_slot=bytes_per_slot,
            protocol=protocol,
            nodes=nodes,
            channels=tuple(channels),
            flows=tuple(flows),
            sweep=sweep,
            ccc=ccc,
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    _check_cross_refs(scenario)
    return scenario


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario(handle.read())


# ------------------------------------------------------------ serializing

def _fmt_ms(us: int) -> str:
    return f"{us_to_ms(us):g}"


def _fmt(value: float) -> str:
    return f"{value:g}"


def serialize_scenario(scenario: Scenario) -> str:
    lines: list[str] = []

    def sec(title: str, *pairs: tuple[str, object]) -> None:
        lines.append(f"[{title}]")
        for key, value in pairs:
            if value is None:
                continue
            lines.append(f"{key} = {value}")
        lines.append("")

    sec(
        "scenario",
        ("name", scenario.name),
        ("mac", scenario.mac),
        ("sim_time_ms", _fmt_ms(scenario.sim_time_us)),
        ("seed", scenario.seed),
        ("replications", scenario.replications),
    )
    t = scenario.timing
    sec(
        "timing",
        ("superframe_ms", _fmt_ms(t.superframe_us)),
        ("quiet_ms", _fmt_ms(t.quiet_us)),
        ("control_ms", _fmt_ms(t.control_us)),
        ("data_ms", _fmt_ms(t.data_us)),
        ("ack_ms", _fmt_ms(t.ack_us)),
        ("wait_ms", _fmt_ms(t.wait_us)),
        ("detect_interval_ms", _fmt_ms(t.detect_interval_us)),
    )
    r = scenario.radio
    sec(
        "radio",
        ("bytes_per_slot", scenario.bytes_per_slot),
        ("tx_power_mw", _fmt(r.tx_power_max_mw)),
        ("rx_power_mw", _fmt(r.rx_power_mw)),
        ("gain_tx", _fmt(r.gain_tx)),
        ("gain_rx", _fmt(r.gain_rx)),
        ("wavelength_m", _fmt(r.wavelength_m)),
        ("loss_factor", _fmt(r.loss_factor)),
        ("range_m", _fmt(r.range_m)),
        ("friis_constant", r.friis_form),
        ("spatial", r.spatial),
    )
    p = scenario.protocol
    sec(
        "protocol",
        ("sleep_after_idle_frames", p.sleep_after_idle_frames),
        ("eager_join", str(p.eager_join).lower()),
        ("power_control", str(p.power_control).lower()),
        ("checks", str(p.checks).lower()),
    )
    for spec in scenario.channels:
        if isinstance(spec.pu, PuIdle):
            sec(f"channel {spec.channel_id}", ("pu", "idle"))
        elif isinstance(spec.pu, PuMarkov):
            cycle = spec.pu.mean_on_us + spec.pu.mean_off_us
            sec(
                f"channel {spec.channel_id}",
                ("pu", "markov"),
                ("duty", _fmt(spec.pu.mean_on_us / cycle)),
                ("cycle_ms", _fmt_ms(cycle)),
            )
        else:
            busy = ", ".join(
                f"{_fmt_ms(a)}-{_fmt_ms(b)}" for a, b in spec.pu.intervals
            )
            sec(f"channel {spec.channel_id}", ("pu", "scripted"), ("busy_ms", busy))
    sec(
        "nodes",
        ("count", scenario.nodes.count),
        ("placement", scenario.nodes.placement),
        ("spacing_m", _fmt(scenario.nodes.spacing_m)),
    )
    for flow in scenario.flows:
        sec(
            f"flow {flow.flow_id}",
            ("source", flow.source),
            ("dest", flow.dest),
            ("packet_bytes", flow.packet_bytes),
            ("interval_ms", _fmt_ms(flow.interval_us)),
            ("start_ms", _fmt_ms(flow.start_us)),
            ("stop_ms", None if flow.stop_us is None else _fmt_ms(flow.stop_us)),
            ("data_type", _DATA_TYPE_LABELS[flow.data_type]),
            ("pi_override", flow.pi_override),
        )
    if scenario.sweep is not None:
        sec(
            "sweep",
            ("parameter", scenario.sweep.parameter),
            ("values", ", ".join(_fmt(v) for v in scenario.sweep.values)),
        )
    if scenario.ccc is not None:
        c = scenario.ccc
        sec(
            "ccc",
            ("cw_min", c.cw_min),
            ("cw_max", c.cw_max),
            ("slot_ms", _fmt_ms(c.slot_us)),
            ("rts_ms", _fmt_ms(c.rts_us)),
            ("cts_ms", _fmt_ms(c.cts_us)),
            ("ack_ms", _fmt_ms(c.ack_us)),
            ("sifs_ms", _fmt_ms(c.sifs_us)),
            ("difs_ms", _fmt_ms(c.difs_us)),
        )
    return "\n".join(lines)
