"""Packet types and their wire codec.

Every packet starts with a common 10-byte header:

    bits  0..3    indicator (packet kind)
    bits  4..15   sync pattern, fixed 0xACE
    bytes 2..3    source node id (uint16, big endian)
    bytes 4..5    destination node id (uint16; 0xFFFF = broadcast)
    bytes 6..7    transmit power in mW (uint16)

followed by a body whose layout depends on the indicator:

    0000  control          [pi u8][slots_requested u16]
    0001  data             [payload_len u16]  (payload bytes are not carried)
    0010  channel-control  [count u8][channel id u16] * count
    1001  ack (data)       [acked_kind u8 = 0][0xFFFF u16]
    1010  ack (chan-ctrl)  [acked_kind u8 = 1][agreed channel u16]

Data packets carry only their length: the simulator never materialises
payload bytes, but the length keeps airtime and throughput accounting
honest.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

SYNC_PATTERN = 0xACE
BROADCAST = 0xFFFF
_NO_CHANNEL = 0xFFFF

_HEADER = struct.Struct(">HHHH")


class Indicator(enum.IntEnum):
    CONTROL = 0b0000
    DATA = 0b0001
    CHANNEL_CONTROL = 0b0010
    ACK_DATA = 0b1001
    ACK_CHANNEL_CONTROL = 0b1010


class PacketError(ValueError):
    """Raised when encoding or decoding hits malformed input."""


@dataclass(frozen=True)
class ControlBody:
    priority_index: int
    slots_requested: int

    def __post_init__(self) -> None:
        if not 0 <= self.priority_index <= 21:
            raise PacketError(f"priority index out of range: {self.priority_index}")
        if not 0 <= self.slots_requested <= 0xFFFF:
            raise PacketError(f"slots_requested out of range: {self.slots_requested}")


@dataclass(frozen=True)
class DataBody:
    payload_len: int

    def __post_init__(self) -> None:
        if not 1 <= self.payload_len <= 0xFFFF:
            raise PacketError(f"payload_len out of range: {self.payload_len}")


@dataclass(frozen=True)
class AckBody:
    # acked_kind "data" closes a data slot; "channel-control" answers a
    # channel negotiation and then carries the agreed channel id.
    acked_kind: str
    channel: int | None = None

    def __post_init__(self) -> None:
        if self.acked_kind not in ("data", "channel-control"):
            raise PacketError(f"unknown acked_kind: {self.acked_kind!r}")
        if self.acked_kind == "data" and self.channel is not None:
            raise PacketError("data acks carry no channel")


@dataclass(frozen=True)
class ChannelControlBody:
    channels: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not 1 <= len(self.channels) <= 0xFF:
            raise PacketError(f"channel list length out of range: {len(self.channels)}")
        for ch in self.channels:
            if not 0 <= ch <= 0xFFFE:
                raise PacketError(f"channel id out of range: {ch}")


Body = ControlBody | DataBody | AckBody | ChannelControlBody


@dataclass(frozen=True)
class Packet:
    indicator: Indicator
    source: int
    dest: int | None  # None means broadcast
    tx_power_mw: int
    body: Body

    def __post_init__(self) -> None:
        if not 0 <= self.source <= 0xFFFE:
            raise PacketError(f"source id out of range: {self.source}")
        if self.dest is not None and not 0 <= self.dest <= 0xFFFE:
            raise PacketError(f"dest id out of range: {self.dest}")
        if not 0 < self.tx_power_mw <= 0xFFFF:
            raise PacketError(f"tx power out of range: {self.tx_power_mw}")
        expected = _BODY_KIND[self.indicator]
        if not isinstance(self.body, expected):
            raise PacketError(
                f"indicator {self.indicator.name} requires {expected.__name__}, "
                f"got {type(self.body).__name__}"
            )
        if self.indicator is Indicator.ACK_DATA and self.body.acked_kind != "data":
            raise PacketError("ACK_DATA must ack a data packet")
        if (
            self.indicator is Indicator.ACK_CHANNEL_CONTROL
            and self.body.acked_kind != "channel-control"
        ):
            raise PacketError("ACK_CHANNEL_CONTROL must ack a channel-control packet")


_BODY_KIND: dict[Indicator, type] = {
    Indicator.CONTROL: ControlBody,
    Indicator.DATA: DataBody,
    Indicator.CHANNEL_CONTROL: ChannelControlBody,
    Indicator.ACK_DATA: AckBody,
    Indicator.ACK_CHANNEL_CONTROL: AckBody,
}


def control_packet(source: int, tx_power_mw: int, pi: int, slots_requested: int) -> Packet:
    """Broadcast control packet announcing priority and slot demand."""
    return Packet(
        Indicator.CONTROL, source, None, tx_power_mw, ControlBody(pi, slots_requested)
    )


def data_packet(source: int, dest: int, tx_power_mw: int, payload_len: int) -> Packet:
    return Packet(Indicator.DATA, source, dest, tx_power_mw, DataBody(payload_len))


def ack_data_packet(source: int, dest: int, tx_power_mw: int) -> Packet:
    return Packet(Indicator.ACK_DATA, source, dest, tx_power_mw, AckBody("data"))


def ack_channel_packet(source: int, dest: int, tx_power_mw: int, channel: int) -> Packet:
    return Packet(
        Indicator.ACK_CHANNEL_CONTROL,
        source,
        dest,
        tx_power_mw,
        AckBody("channel-control", channel),
    )


def channel_control_packet(
    source: int, dest: int, tx_power_mw: int, channels
) -> Packet:
    return Packet(
        Indicator.CHANNEL_CONTROL, source, dest, tx_power_mw,
        ChannelControlBody(tuple(channels)),
    )


def encode(packet: Packet) -> bytes:
    head = _HEADER.pack(
        (packet.indicator << 12) | SYNC_PATTERN,
        packet.source,
        BROADCAST if packet.dest is None else packet.dest,
        packet.tx_power_mw,
    )
    body = packet.body
    if isinstance(body, ControlBody):
        tail = struct.pack(">BH", body.priority_index, body.slots_requested)
    elif isinstance(body, DataBody):
        tail = struct.pack(">H", body.payload_len)
    elif isinstance(body, AckBody):
        kind = 0 if body.acked_kind == "data" else 1
        channel = _NO_CHANNEL if body.channel is None else body.channel
        tail = struct.pack(">BH", kind, channel)
    elif isinstance(body, ChannelControlBody):
        tail = struct.pack(">B", len(body.channels))
        tail += struct.pack(f">{len(body.channels)}H", *body.channels)
    else:  # pragma: no cover - Packet validation forbids this
        raise PacketError(f"unencodable body {type(body).__name__}")
    return head + tail


def decode(blob: bytes) -> Packet:
    """Parse a packet, rejecting bad sync, unknown indicators and truncation."""
    if len(blob) < _HEADER.size:
        raise PacketError(f"truncated header: {len(blob)} bytes")
    word, source, dest, tx_power = _HEADER.unpack_from(blob)
    if word & 0x0FFF != SYNC_PATTERN:
        raise PacketError(f"bad sync pattern: 0x{word & 0x0FFF:03x}")
    try:
        indicator = Indicator(word >> 12)
    except ValueError:
        raise PacketError(f"unknown indicator: 0b{word >> 12:04b}") from None
    rest = blob[_HEADER.size :]

    body: Body
    if indicator is Indicator.CONTROL:
        body = ControlBody(*_unpack(">BH", rest, "control body"))
    elif indicator is Indicator.DATA:
        body = DataBody(*_unpack(">H", rest, "data body"))
    elif indicator in (Indicator.ACK_DATA, Indicator.ACK_CHANNEL_CONTROL):
        kind, channel = _unpack(">BH", rest, "ack body")
        if kind not in (0, 1):
            raise PacketError(f"unknown acked_kind code: {kind}")
        body = AckBody(
            "data" if kind == 0 else "channel-control",
            None if channel == _NO_CHANNEL else channel,
        )
    else:
        (count,) = _unpack(">B", rest, "channel list header", exact=False)
        channels = _unpack(f">{count}H", rest[1:], "channel list")
        body = ChannelControlBody(tuple(channels))
    return Packet(indicator, source, None if dest == BROADCAST else dest, tx_power, body)


def _unpack(fmt: str, blob: bytes, what: str, exact: bool = True) -> tuple:
    size = struct.calcsize(fmt)
    if len(blob) < size:
        raise PacketError(f"truncated {what}: {len(blob)} < {size} bytes")
    if exact and len(blob) != size:
        raise PacketError(f"trailing bytes after {what}")
    return struct.unpack_from(fmt, blob)
