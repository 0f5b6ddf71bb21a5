import pytest
from hypothesis import given, strategies as st

from dsatmac.packets import (
    AckBody,
    ChannelControlBody,
    ControlBody,
    DataBody,
    Indicator,
    Packet,
    PacketError,
    ack_channel_packet,
    ack_data_packet,
    channel_control_packet,
    control_packet,
    data_packet,
    decode,
    encode,
)

# Frozen wire images. These pin the byte layout: any codec change that
# alters them is a protocol break, not a refactor.
GOLDEN = {
    "control": ("0ace0003ffff05dc090002", control_packet(3, 1500, 9, 2)),
    "data": ("1ace00010002032003e8", data_packet(1, 2, 800, 1000)),
    "ack-data": ("9ace00020001032000ffff", ack_data_packet(2, 1, 800)),
    "channel-control": (
        "2ace0001000205dc03000200050007",
        channel_control_packet(1, 2, 1500, [2, 5, 7]),
    ),
    "ack-channel": ("aace0002000105dc010005", ack_channel_packet(2, 1, 1500, 5)),
}


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_wire_images(name):
    hexstr, packet = GOLDEN[name]
    assert encode(packet).hex() == hexstr
    assert decode(bytes.fromhex(hexstr)) == packet


def test_control_packet_fields():
    p = control_packet(3, 1500, 9, 2)
    assert p.indicator is Indicator.CONTROL
    assert p.source == 3
    assert p.dest is None
    assert p.body == ControlBody(priority_index=9, slots_requested=2)


def test_broadcast_dest_round_trips_as_none():
    p = control_packet(7, 1500, 0, 0)
    assert decode(encode(p)).dest is None


def test_data_ack_carries_no_channel():
    p = ack_data_packet(2, 1, 800)
    assert p.body == AckBody("data", None)


def test_channel_ack_names_the_agreed_channel():
    p = ack_channel_packet(2, 1, 1500, 5)
    assert p.body == AckBody("channel-control", 5)


def test_channel_list_survives_round_trip():
    p = channel_control_packet(1, 2, 1500, [9, 4, 11])
    assert decode(encode(p)).body == ChannelControlBody((9, 4, 11))


# ---------------------------------------------------------------- errors

def test_truncated_header_rejected():
    with pytest.raises(PacketError, match="truncated"):
        decode(bytes.fromhex("0ace0003"))


def test_bad_sync_nibbles_rejected():
    with pytest.raises(PacketError, match="sync"):
        decode(bytes.fromhex("0bad0003ffff05dc090002"))


def test_unknown_indicator_rejected():
    # 0b0011 is not an assigned packet kind
    with pytest.raises(PacketError, match="indicator"):
        decode(bytes.fromhex("3ace0003ffff05dc090002"))


def test_truncated_body_rejected():
    whole = encode(data_packet(1, 2, 800, 1000))
    with pytest.raises(PacketError):
        decode(whole[:-1])


def test_trailing_bytes_rejected():
    whole = encode(data_packet(1, 2, 800, 1000))
    with pytest.raises(PacketError, match="trailing"):
        decode(whole + b"\x00")


def test_unknown_ack_kind_code_rejected():
    frame = bytearray(encode(ack_data_packet(2, 1, 800)))
    frame[8] = 7  # the kind byte only has codes 0 and 1
    with pytest.raises(PacketError):
        decode(bytes(frame))


def test_channel_control_needs_at_least_one_channel():
    with pytest.raises(ValueError):
        channel_control_packet(1, 2, 1500, [])


@pytest.mark.parametrize("pi", [-1, 22])
def test_priority_index_range_enforced(pi):
    with pytest.raises(ValueError):
        ControlBody(priority_index=pi, slots_requested=0)


def test_power_field_range_enforced():
    with pytest.raises(ValueError):
        control_packet(3, 0, 9, 2)
    with pytest.raises(ValueError):
        control_packet(3, 0x10000, 9, 2)


def test_payload_length_must_be_positive():
    with pytest.raises(ValueError):
        DataBody(0)


# ------------------------------------------------------------- property

node_ids = st.integers(min_value=0, max_value=0xFFFE)
powers = st.integers(min_value=1, max_value=0xFFFF)


@st.composite
def packets(draw):
    kind = draw(st.sampled_from(["control", "data", "ack-data", "ack-channel", "cc"]))
    src = draw(node_ids)
    dst = draw(node_ids)
    pwr = draw(powers)
    if kind == "control":
        return control_packet(src, pwr, draw(st.integers(0, 21)), draw(st.integers(0, 0xFFFF)))
    if kind == "data":
        return data_packet(src, dst, pwr, draw(st.integers(1, 0xFFFF)))
    if kind == "ack-data":
        return ack_data_packet(src, dst, pwr)
    if kind == "ack-channel":
        return ack_channel_packet(src, dst, pwr, draw(node_ids))
    channels = draw(st.lists(node_ids, min_size=1, max_size=12))
    return channel_control_packet(src, dst, pwr, channels)


@given(packets())
def test_every_packet_round_trips(packet: Packet):
    assert decode(encode(packet)) == packet
