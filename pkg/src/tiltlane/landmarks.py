"""21-point hand landmark frames: validation, mirroring, and the line codec.

A frame is one newline-delimited JSON message, the same format on the wire
and in trace files:

    {"t": <int ms>, "hand": null | [[x,y] or [x,y,z] x21], "handedness": "left"|"right"|null}

Coordinates are normalized image coordinates: x grows rightward, y grows
downward, both nominally in [0,1]. Trackers report landmarks slightly out
of frame, so finite values up to 0.5 beyond that range are accepted.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import NamedTuple, Optional


NUM_LANDMARKS = 21
COORD_SLACK = 0.5  # tolerance beyond [0,1] for x and y


class MalformedFrame(ValueError):
    """Raised when a frame message cannot be decoded into a valid frame."""


class LandmarkIndex(IntEnum):
    WRIST = 0
    THUMB_CMC = 1
    THUMB_MCP = 2
    THUMB_IP = 3
    THUMB_TIP = 4
    INDEX_FINGER_MCP = 5
    INDEX_FINGER_PIP = 6
    INDEX_FINGER_DIP = 7
    INDEX_FINGER_TIP = 8
    MIDDLE_FINGER_MCP = 9
    MIDDLE_FINGER_PIP = 10
    MIDDLE_FINGER_DIP = 11
    MIDDLE_FINGER_TIP = 12
    RING_FINGER_MCP = 13
    RING_FINGER_PIP = 14
    RING_FINGER_DIP = 15
    RING_FINGER_TIP = 16
    PINKY_MCP = 17
    PINKY_PIP = 18
    PINKY_DIP = 19
    PINKY_TIP = 20


class Handedness(Enum):
    LEFT = "left"
    RIGHT = "right"
    UNKNOWN = "unknown"


class Point2D(NamedTuple):
    x: float
    y: float
    z: Optional[float] = None  # relative depth, carried but never classified on


@dataclass(frozen=True)
class LandmarkFrame:
    timestamp_ms: int
    hand: Optional[tuple[Point2D, ...]] = None  # exactly 21 points when present
    handedness: Handedness = Handedness.UNKNOWN


def _coerce_timestamp(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedFrame(f"timestamp must be a number, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise MalformedFrame(f"timestamp must be integral milliseconds, got {value!r}")
        value = int(value)
    if value < 0:
        raise MalformedFrame(f"negative timestamp {value}")
    return value


def _coerce_coord(value, slack_low: float, slack_high: float, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedFrame(f"{what} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise MalformedFrame(f"non-finite {what}")
    if not (slack_low <= value <= slack_high):
        raise MalformedFrame(f"{what}={value} outside tolerated range")
    return value


_COORD_LO = -COORD_SLACK
_COORD_HI = 1.0 + COORD_SLACK


def _decode_point(entry, index: int) -> Point2D:
    # fast path: plain in-range numbers, NaN fails the comparisons. Decoding
    # is on the per-frame hot path, so no helper calls before the fallback.
    if type(entry) is list:
        n = len(entry)
        if n == 2 or n == 3:
            x, y = entry[0], entry[1]
            tx, ty = type(x), type(y)
            if (tx is float or tx is int) and (ty is float or ty is int):
                x, y = float(x), float(y)
                if _COORD_LO <= x <= _COORD_HI and _COORD_LO <= y <= _COORD_HI:
                    if n == 2:
                        return Point2D(x, y)
                    z = entry[2]
                    tz = type(z)
                    if tz is float or tz is int:
                        z = float(z)
                        if -math.inf < z < math.inf:
                            return Point2D(x, y, z)
    return _decode_point_checked(entry, index)


def _decode_point_checked(entry, index: int) -> Point2D:
    if not isinstance(entry, (list, tuple)) or len(entry) not in (2, 3):
        raise MalformedFrame(f"landmark {index} must be [x,y] or [x,y,z]")
    x = _coerce_coord(entry[0], -COORD_SLACK, 1.0 + COORD_SLACK, f"landmark {index} x")
    y = _coerce_coord(entry[1], -COORD_SLACK, 1.0 + COORD_SLACK, f"landmark {index} y")
    z = None
    if len(entry) == 3:
        z = _coerce_coord(entry[2], -math.inf, math.inf, f"landmark {index} z")
    return Point2D(x, y, z)


def decode_frame(line: str) -> LandmarkFrame:
    """Decode one protocol message into a validated frame.

    Raises MalformedFrame on bad syntax, wrong point count, non-finite
    coordinates, or a negative timestamp; the caller should drop and count
    the offending line.
    """
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedFrame(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedFrame("frame message must be a JSON object")
    if "t" not in obj or "hand" not in obj:
        raise MalformedFrame("frame message needs 't' and 'hand'")

    timestamp = _coerce_timestamp(obj["t"])

    raw_hand = obj["hand"]
    hand: Optional[tuple[Point2D, ...]] = None
    if raw_hand is not None:
        if not isinstance(raw_hand, list):
            raise MalformedFrame("'hand' must be null or an array")
        if len(raw_hand) != NUM_LANDMARKS:
            raise MalformedFrame(
                f"expected {NUM_LANDMARKS} landmarks, got {len(raw_hand)}")
        hand = tuple([_decode_point(entry, i) for i, entry in enumerate(raw_hand)])

    raw_handedness = obj.get("handedness")
    if raw_handedness is None:
        handedness = Handedness.UNKNOWN
    elif raw_handedness in ("left", "right"):
        handedness = Handedness(raw_handedness)
    else:
        raise MalformedFrame(f"bad handedness {raw_handedness!r}")

    return LandmarkFrame(timestamp_ms=timestamp, hand=hand, handedness=handedness)


def encode_frame(frame: LandmarkFrame) -> str:
    """Encode a frame to its one-line wire form. Inverse of decode_frame."""
    hand = None
    if frame.hand is not None:
        hand = [[p.x, p.y] if p.z is None else [p.x, p.y, p.z] for p in frame.hand]
    handedness = None if frame.handedness is Handedness.UNKNOWN else frame.handedness.value
    return json.dumps(
        {"t": frame.timestamp_ms, "hand": hand, "handedness": handedness},
        separators=(",", ":"),
    )


_MIRRORED_HANDEDNESS = {
    Handedness.LEFT: Handedness.RIGHT,
    Handedness.RIGHT: Handedness.LEFT,
    Handedness.UNKNOWN: Handedness.UNKNOWN,
}


def mirror_frame(frame: LandmarkFrame) -> LandmarkFrame:
    """Reflect the frame horizontally (x -> 1-x), swapping the handedness tag.

    Selfie-view correction: a user's rightward tilt shows up mirrored in the
    raw camera image; this maps it back onto +x. Involution by construction.
    """
    hand = frame.hand
    if hand is not None:
        hand = tuple([Point2D(1.0 - p.x, p.y, p.z) for p in hand])
    return LandmarkFrame(
        timestamp_ms=frame.timestamp_ms,
        hand=hand,
        handedness=_MIRRORED_HANDEDNESS[frame.handedness],
    )
