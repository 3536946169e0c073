"""Frame codec, validation, and mirroring."""
import json
import math

import pytest
from hypothesis import given, strategies as st

from tiltlane.landmarks import (COORD_SLACK, NUM_LANDMARKS, Handedness,
                                LandmarkFrame, LandmarkIndex, MalformedFrame,
                                Point2D, decode_frame, encode_frame, mirror_frame)


def _hand_payload(n=NUM_LANDMARKS, x=0.5, y=0.8):
    return [[x, y] for _ in range(n)]


def _line(t=120, hand="default", handedness=None):
    if hand == "default":
        hand = _hand_payload()
    obj = {"t": t, "hand": hand}
    if handedness is not None:
        obj["handedness"] = handedness
    return json.dumps(obj)


def test_landmark_index_is_contiguous_0_to_20():
    values = [int(i) for i in LandmarkIndex]
    assert values == list(range(21))
    assert LandmarkIndex.WRIST == 0
    assert LandmarkIndex.INDEX_FINGER_MCP == 5
    assert LandmarkIndex.INDEX_FINGER_TIP == 8
    assert LandmarkIndex.PINKY_TIP == 20


def test_decode_well_formed_frame():
    frame = decode_frame(_line(t=120))
    assert frame.timestamp_ms == 120
    assert frame.hand is not None and len(frame.hand) == 21
    assert frame.hand[0] == Point2D(0.5, 0.8)


def test_decode_no_hand():
    frame = decode_frame('{"t":0,"hand":null}')
    assert frame.timestamp_ms == 0
    assert frame.hand is None
    assert frame.handedness is Handedness.UNKNOWN


def test_decode_wrong_point_count():
    with pytest.raises(MalformedFrame):
        decode_frame(_line(hand=_hand_payload(n=20)))
    with pytest.raises(MalformedFrame):
        decode_frame(_line(hand=_hand_payload(n=22)))


@pytest.mark.parametrize("bad", [
    "not json",
    "[1,2,3]",
    '{"hand":null}',                      # missing t
    '{"t":5}',                            # missing hand
    '{"t":-1,"hand":null}',               # negative timestamp
    '{"t":1.5,"hand":null}',              # fractional ms
    '{"t":true,"hand":null}',             # bool is not a timestamp
    '{"t":0,"hand":{}}',                  # hand must be an array or null
    '{"t":0,"hand":null,"handedness":"both"}',
])
def test_decode_rejects_malformed(bad):
    with pytest.raises(MalformedFrame):
        decode_frame(bad)


@pytest.mark.parametrize("coord", [float("nan"), float("inf"), -float("inf"), 1.51, -0.51])
def test_decode_rejects_bad_coordinates(coord):
    hand = _hand_payload()
    hand[7] = [coord, 0.5]
    with pytest.raises(MalformedFrame):
        decode_frame(_line(hand=hand))
    hand[7] = [0.5, coord]
    with pytest.raises(MalformedFrame):
        decode_frame(_line(hand=hand))


def test_out_of_range_but_within_slack_is_tolerated():
    hand = _hand_payload()
    hand[3] = [-COORD_SLACK, 1.0 + COORD_SLACK]
    frame = decode_frame(_line(hand=hand))
    assert frame.hand[3] == Point2D(-0.5, 1.5)


def test_z_is_carried_and_nonfinite_z_rejected():
    hand = _hand_payload()
    hand[8] = [0.5, 0.5, -0.07]
    frame = decode_frame(_line(hand=hand))
    assert frame.hand[8].z == -0.07
    hand[8] = [0.5, 0.5, float("nan")]
    with pytest.raises(MalformedFrame):
        decode_frame(_line(hand=hand))


def test_handedness_parsing():
    assert decode_frame(_line(handedness="left")).handedness is Handedness.LEFT
    assert decode_frame(_line(handedness="right")).handedness is Handedness.RIGHT
    assert decode_frame('{"t":0,"hand":null,"handedness":null}').handedness is Handedness.UNKNOWN


coords = st.floats(min_value=-0.5, max_value=1.5, allow_nan=False)
z_coords = st.one_of(st.none(), st.floats(min_value=-10, max_value=10, allow_nan=False))
points = st.builds(Point2D, coords, coords, z_coords)
hands = st.one_of(st.none(), st.tuples(*[points] * NUM_LANDMARKS))
frames = st.builds(LandmarkFrame,
                   st.integers(min_value=0, max_value=10**9),
                   hands,
                   st.sampled_from(list(Handedness)))


@given(frames)
def test_codec_round_trip(frame):
    assert decode_frame(encode_frame(frame)) == frame


@given(frames)
def test_mirror_is_an_involution(frame):
    double = mirror_frame(mirror_frame(frame))
    assert double.timestamp_ms == frame.timestamp_ms
    assert double.handedness == frame.handedness
    if frame.hand is None:
        assert double.hand is None
    else:
        for p, q in zip(frame.hand, double.hand):
            assert math.isclose(p.x, q.x, abs_tol=1e-12)
            assert p.y == q.y and p.z == q.z


@given(frames)
def test_mirror_preserves_pairwise_distances(frame):
    if frame.hand is None:
        return
    mirrored = mirror_frame(frame).hand
    for i in (0, 5, 8):
        for j in (5, 8, 20):
            d0 = math.dist(frame.hand[i][:2], frame.hand[j][:2])
            d1 = math.dist(mirrored[i][:2], mirrored[j][:2])
            assert math.isclose(d0, d1, abs_tol=1e-12)


def test_mirror_examples():
    hand = _hand_payload()
    hand[0] = [0.3, 0.4]
    hand[1] = [0.5, 0.9]
    frame = mirror_frame(decode_frame(_line(hand=hand, handedness="left")))
    assert frame.hand[0] == Point2D(0.7, 0.4)
    assert frame.hand[1] == Point2D(0.5, 0.9)  # x=0.5 is the fixed point
    assert frame.handedness is Handedness.RIGHT
