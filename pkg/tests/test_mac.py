import math
import random

import pytest

from dsatmac.mac import (
    Node,
    NodePhase,
    QueueEntry,
    distance,
    negotiate_channel_switch,
    place_nodes,
    rank_switch_candidates,
)
from dsatmac.priority import DataType
from dsatmac.scenario import NodeLayout


def entry(nbytes, arrival_us=0, data_type=DataType.TEXT_FILE, pi_override=None):
    return QueueEntry(
        flow_id=1, dest=2, total_bytes=nbytes, remaining_bytes=nbytes,
        arrival_us=arrival_us, data_type=data_type, pi_override=pi_override,
    )


def fresh_node(sleep_after=3):
    return Node(node_id=1, position=(0.0, 0.0), registry_capacity=8,
                sleep_after_idle_frames=sleep_after)


def test_new_node_observes_one_superframe_before_contending():
    node = fresh_node()
    node.enqueue(entry(1000))
    assert node.phase is NodePhase.OBSERVING
    assert not node.is_contender()
    left = node.end_frame(registered=False)
    assert not left
    assert node.phase is NodePhase.PASSIVE
    assert node.is_contender()


def test_idle_passive_node_never_contends():
    node = fresh_node()
    node.end_frame(registered=False)
    assert not node.is_contender()


def test_admit_moves_to_registered():
    node = fresh_node()
    node.end_frame(registered=False)
    node.admit()
    assert node.phase is NodePhase.REGISTERED
    assert not node.is_contender()


# ---------------------------------------------------------------- demand

def test_empty_queue_heartbeats_zero_demand():
    assert fresh_node().control_demand(0, 60_000, 1000, 25) == (0, 0)


def test_demand_covers_the_head_packet_only():
    node = fresh_node()
    node.enqueue(entry(2500))
    node.enqueue(entry(90_000))
    pi, slots = node.control_demand(0, 60_000, 1000, 25)
    assert slots == math.ceil(2500 / 1000)


def test_demand_is_capped_at_the_slot_budget():
    node = fresh_node()
    node.enqueue(entry(90_000))
    _, slots = node.control_demand(0, 60_000, 1000, 25)
    assert slots == 25


def test_priority_rises_while_the_head_packet_waits():
    node = fresh_node()
    node.enqueue(entry(1000, arrival_us=0))
    pi_fresh, _ = node.control_demand(60_000, 60_000, 1000, 25)
    pi_stale, _ = node.control_demand(7 * 60_000, 60_000, 1000, 25)
    assert pi_fresh == 0   # one frame waited, short queue, bulk data
    assert pi_stale > pi_fresh


def test_queue_depth_feeds_the_priority_index():
    node = fresh_node()
    for _ in range(6):
        node.enqueue(entry(1000))
    pi, _ = node.control_demand(0, 60_000, 1000, 25)
    assert pi == 1  # queue band 6..10


def test_pi_override_wins_over_derived_priority():
    node = fresh_node()
    node.enqueue(entry(1000, pi_override=17))
    pi, _ = node.control_demand(10 * 60_000, 60_000, 1000, 25)
    assert pi == 17


# ------------------------------------------------------------- chunking

def test_chunk_lifecycle_commit_path():
    node = fresh_node()
    node.enqueue(entry(2500))
    first = node.start_chunk(1000)
    assert first.nbytes == 1000
    assert node.commit_chunk() is None
    assert node.queue[0].remaining_bytes == 1500
    node.start_chunk(1000)
    node.commit_chunk()
    last = node.start_chunk(1000)
    assert last.nbytes == 500
    done = node.commit_chunk()
    assert done is not None and done.total_bytes == 2500
    assert not node.queue


def test_aborted_chunk_keeps_the_bytes_owed():
    node = fresh_node()
    node.enqueue(entry(2500))
    node.start_chunk(1000)
    node.abort_chunk()
    assert node.queue[0].remaining_bytes == 2500
    retry = node.start_chunk(1000)
    assert retry.nbytes == 1000


def test_one_chunk_in_flight_at_a_time():
    node = fresh_node()
    node.enqueue(entry(2500))
    node.start_chunk(1000)
    with pytest.raises(RuntimeError, match="already has a chunk"):
        node.start_chunk(1000)


def test_start_chunk_on_empty_queue_returns_none():
    assert fresh_node().start_chunk(1000) is None


def test_commit_without_pending_chunk_is_an_error():
    with pytest.raises(RuntimeError, match="no chunk"):
        fresh_node().commit_chunk()


def test_backlog_counts_remaining_bytes():
    node = fresh_node()
    node.enqueue(entry(2500))
    node.enqueue(entry(100))
    node.start_chunk(1000)
    node.commit_chunk()
    assert node.backlog_bytes == 1600


# ------------------------------------------------------------ sleeping

def test_registered_node_leaves_after_the_idle_threshold():
    node = fresh_node(sleep_after=3)
    node.end_frame(registered=False)
    node.admit()
    assert not node.end_frame(registered=True)
    assert not node.end_frame(registered=True)
    assert node.end_frame(registered=True)   # third idle frame: leave
    assert node.phase is NodePhase.PASSIVE
    assert node.idle_frames == 0


def test_queued_traffic_resets_the_idle_count():
    node = fresh_node(sleep_after=2)
    node.end_frame(registered=False)
    node.admit()
    node.end_frame(registered=True)
    node.enqueue(entry(1000))
    assert not node.end_frame(registered=True)
    assert node.idle_frames == 0


def test_sleep_threshold_zero_disables_leaving():
    node = fresh_node(sleep_after=0)
    node.end_frame(registered=False)
    node.admit()
    for _ in range(50):
        assert not node.end_frame(registered=True)
    assert node.phase is NodePhase.REGISTERED


# ------------------------------------------------------------ placement

def test_ring_layout_is_equidistant_from_the_centre():
    pos = place_nodes(NodeLayout(count=6, placement="ring", spacing_m=80.0),
                      random.Random(0))
    assert sorted(pos) == [1, 2, 3, 4, 5, 6]
    for xy in pos.values():
        assert math.hypot(*xy) == pytest.approx(80.0)
    assert len({tuple(round(c, 9) for c in xy) for xy in pos.values()}) == 6


def test_line_layout_spacing():
    pos = place_nodes(NodeLayout(count=4, placement="line", spacing_m=30.0),
                      random.Random(0))
    assert pos == {1: (0.0, 0.0), 2: (30.0, 0.0), 3: (60.0, 0.0), 4: (90.0, 0.0)}


def test_random_layout_is_seeded_and_bounded():
    layout = NodeLayout(count=12, placement="random", spacing_m=50.0)
    a = place_nodes(layout, random.Random(42))
    b = place_nodes(layout, random.Random(42))
    c = place_nodes(layout, random.Random(43))
    assert a == b and a != c
    for xy in a.values():
        assert math.hypot(*xy) <= 50.0


def test_distance_is_euclidean():
    assert distance((0.0, 0.0), (3.0, 4.0)) == pytest.approx(5.0)


# ------------------------------------------------- channel negotiation

def test_candidates_ranked_by_occupancy_then_duty_then_id():
    ranked = rank_switch_candidates(
        own_vacant=[1, 2, 3, 4],
        peer_vacant=[2, 3, 4, 9],
        occupancy={2: 0.5, 3: 0.1, 4: 0.1},
        pu_duty={3: 0.4, 4: 0.2},
    )
    assert ranked == [4, 3, 2]


def test_negotiation_picks_the_top_candidate_or_nothing():
    assert negotiate_channel_switch([1, 2], [2, 5], {}, {}) == 2
    assert negotiate_channel_switch([1, 2], [5, 6], {}, {}) is None
