"""Debounced hysteresis filter: continuous tilt in, press/release events out.

Raw thresholding on a noisy tilt flickers at the boundary, so direction
changes are gated two ways:

  hysteresis  a direction engages at |tilt| >= enter_deg but only lets go
              once |tilt| <= exit_deg; the band in between sustains whatever
              is currently held.
  debounce    any change of the instantaneous label must persist for
              debounce_frames consecutive valid frames before it takes
              effect; dropouts shorter than no_hand_release_frames pause
              the count rather than restarting it.

Output events are edge-triggered press/release pairs, keyboard-like on
purpose: one press per gesture onset, one release per offset, strictly
alternating per direction. Losing the hand for no_hand_release_frames
frames force-releases whatever is held.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional

from .classifier import GestureMeasurement


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"


class EventKind(Enum):
    PRESS = "press"
    RELEASE = "release"


class CommandEvent(NamedTuple):
    kind: EventKind
    direction: Direction
    timestamp_ms: int


@dataclass(frozen=True)
class FilterConfig:
    enter_deg: float = 20.0
    exit_deg: float = 12.0
    debounce_frames: int = 3
    no_hand_release_frames: int = 5

    def validate(self) -> None:
        if not (0 < self.exit_deg < self.enter_deg < 90):
            raise ValueError(
                f"need 0 < exit_deg < enter_deg < 90, got exit={self.exit_deg} enter={self.enter_deg}")
        if self.debounce_frames < 1:
            raise ValueError("debounce_frames must be >= 1")
        if self.no_hand_release_frames < 1:
            raise ValueError("no_hand_release_frames must be >= 1")


@dataclass(frozen=True)
class DirectionState:
    """Filter state. `held` None means neutral; at most one direction held."""
    held: Optional[Direction] = None
    pending_label: Optional[Direction] = None  # only meaningful while pending_count > 0
    pending_count: int = 0
    invalid_count: int = 0


def _instant_label(held: Optional[Direction], tilt_deg: float,
                   cfg: FilterConfig) -> Optional[Direction]:
    if tilt_deg >= cfg.enter_deg:
        return Direction.RIGHT
    if tilt_deg <= -cfg.enter_deg:
        return Direction.LEFT
    if held is None:
        return None
    if abs(tilt_deg) <= cfg.exit_deg:
        return None
    return held  # inside the hysteresis band: sustain


def step(state: DirectionState, m: GestureMeasurement,
         cfg: FilterConfig) -> tuple[DirectionState, list[CommandEvent]]:
    """Advance the filter by one frame; returns the new state and emitted events.

    A direction-to-direction change emits the release of the old direction
    and the press of the new one in that order, in a single step, so no
    observer ever sees two directions held.
    """
    events: list[CommandEvent] = []

    if not m.valid:
        invalid_count = state.invalid_count + 1
        if invalid_count >= cfg.no_hand_release_frames:
            if state.held is not None:
                events.append(CommandEvent(EventKind.RELEASE, state.held,
                                           m.timestamp_ms))
            return DirectionState(), events
        # short dropouts must not break a pending debounce run, or a camera
        # slower than the tick rate could never complete a gesture
        return replace(state, invalid_count=invalid_count), events

    label = _instant_label(state.held, m.tilt_deg, cfg)
    if label == state.held:
        return DirectionState(held=state.held), events

    if state.pending_count > 0 and label == state.pending_label:
        count = state.pending_count + 1
    else:
        count = 1
    if count < cfg.debounce_frames:
        return DirectionState(held=state.held, pending_label=label,
                              pending_count=count), events

    if state.held is not None:
        events.append(CommandEvent(EventKind.RELEASE, state.held, m.timestamp_ms))
    if label is not None:
        events.append(CommandEvent(EventKind.PRESS, label, m.timestamp_ms))
    return DirectionState(held=label), events


def reset(state: DirectionState) -> DirectionState:
    """Fresh neutral state with zeroed counters. Emits nothing: callers that
    need releases first feed invalid frames through step."""
    return DirectionState()
