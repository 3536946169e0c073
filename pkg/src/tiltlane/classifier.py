"""Per-frame gesture geometry from landmarks 0, 5 and 8.

Two angles drive everything downstream:

  tilt      signed inclination of the index MCP->TIP vector against image-up,
            positive when the finger leans toward +x. This is the quantity
            the left/right decision is made on.
  extension interior angle at the MCP between the rays toward the wrist and
            toward the fingertip. A nearly straight finger (large angle)
            means the user is actually pointing; a folded finger is ignored.

Both are pure planar geometry; z is never consulted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .landmarks import LandmarkFrame, LandmarkIndex, Point2D

DEFAULT_EXTENSION_GATE_DEG = 150.0
DEFAULT_MIN_SEGMENT_LEN = 0.02


class DegeneratePoints(ValueError):
    """Raised when points are too close together to define an angle."""


@dataclass(frozen=True)
class ClassifierConfig:
    extension_gate_deg: float = DEFAULT_EXTENSION_GATE_DEG
    min_segment_len: float = DEFAULT_MIN_SEGMENT_LEN

    def validate(self) -> None:
        if not (0 < self.extension_gate_deg <= 180):
            raise ValueError(f"extension_gate_deg={self.extension_gate_deg} not in (0, 180]")
        if not self.min_segment_len > 0:
            raise ValueError(f"min_segment_len={self.min_segment_len} must be > 0")


class GestureMeasurement(NamedTuple):
    tilt_deg: float
    extension_deg: float
    valid: bool
    timestamp_ms: int = 0  # carried through so command events can be stamped


def invalid_measurement(timestamp_ms: int = 0) -> GestureMeasurement:
    return GestureMeasurement(0.0, 0.0, False, timestamp_ms)


def tilt_angle(mcp: Point2D, tip: Point2D,
               min_segment_len: float = DEFAULT_MIN_SEGMENT_LEN) -> float:
    """Signed degrees of (tip - mcp) against image-up (0, -1).

    atan2 of (dx, -dy): 0 is straight up, +90 horizontal toward +x,
    -90 horizontal toward -x, +/-180 straight down.
    """
    dx = tip.x - mcp.x
    dy = tip.y - mcp.y
    if math.hypot(dx, dy) < min_segment_len:
        raise DegeneratePoints("mcp and tip too close for a stable direction")
    return math.degrees(math.atan2(dx, -dy))


def vertex_angle(wrist: Point2D, mcp: Point2D, tip: Point2D,
                 min_segment_len: float = DEFAULT_MIN_SEGMENT_LEN) -> float:
    """Interior angle at the MCP between the wrist ray and the tip ray, in [0, 180].

    Uses atan2(|cross|, dot), which is the well-conditioned form of the
    normalized-dot-product angle for near-collinear rays.
    """
    ux = wrist.x - mcp.x
    uy = wrist.y - mcp.y
    vx = tip.x - mcp.x
    vy = tip.y - mcp.y
    if math.hypot(ux, uy) < min_segment_len or math.hypot(vx, vy) < min_segment_len:
        raise DegeneratePoints("segment at the MCP vertex too short")
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return math.degrees(math.atan2(abs(cross), dot))


def measure(frame: LandmarkFrame, cfg: ClassifierConfig) -> GestureMeasurement:
    """Measure one frame. Degeneracy and a folded finger both fold into valid=False.

    An invalid measurement always carries zeroed angles; consumers must gate
    on `valid` and never read the angles otherwise.
    """
    if frame.hand is None:
        return invalid_measurement(frame.timestamp_ms)
    wrist = frame.hand[LandmarkIndex.WRIST]
    mcp = frame.hand[LandmarkIndex.INDEX_FINGER_MCP]
    tip = frame.hand[LandmarkIndex.INDEX_FINGER_TIP]
    try:
        extension = vertex_angle(wrist, mcp, tip, cfg.min_segment_len)
        tilt = tilt_angle(mcp, tip, cfg.min_segment_len)
    except DegeneratePoints:
        return invalid_measurement(frame.timestamp_ms)
    if extension < cfg.extension_gate_deg:
        return invalid_measurement(frame.timestamp_ms)
    return GestureMeasurement(tilt, extension, True, frame.timestamp_ms)
