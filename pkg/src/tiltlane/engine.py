"""Fixed-timestep pipeline shell: frames in, events and snapshots out.

The engine owns all mutable pipeline state (filter state machine, game
state, tick counter) and advances in logical ticks. Callers decide which
frames belong to which tick: the live server drains its arrival queue at
every tick boundary, the replayer assigns frames by timestamp. Both go
through the same step() so a recorded session and its replay are the same
computation.

Trace files are newline-delimited JSON, one record per line, four kinds:

    frame     {"t":ms,"hand":...,"handedness":...}       (landmark codec)
    label     {"t":ms,"label":"left"|"right"|"neutral"|"none"}
    event     {"t":ms,"event":"press"|"release","dir":"left"|"right"}
    snapshot  {"tick":n,"status":...,...}                 (game snapshot)

plus an optional self-describing header line {"header":{...}} carrying the
full config. Frame timestamps are rewritten to the exact start time of the
tick that consumed them, which makes the frame-to-tick mapping a bijection
and the whole record/replay loop a fixpoint.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Callable, NamedTuple, Optional, Sequence

from . import filtering, game
from .classifier import GestureMeasurement, invalid_measurement, measure
from .config import SessionConfig, config_to_dict
from .filtering import CommandEvent, DirectionState
from .landmarks import LandmarkFrame, MalformedFrame, decode_frame, encode_frame, mirror_frame

LABEL_CLASSES = ("left", "right", "neutral", "none")


class MalformedTrace(ValueError):
    """Raised when a trace file line is not one of the known record kinds."""


def timestamp_for_tick(tick: int, tick_hz: int) -> int:
    return round(tick * 1000 / tick_hz)


def tick_for_timestamp(t_ms: int, tick_hz: int) -> int:
    # tick 0 is the pristine initial state; the earliest a frame can act is tick 1
    return max(1, round(t_ms * tick_hz / 1000))


def encode_event(ev: CommandEvent) -> str:
    return json.dumps(
        {"t": ev.timestamp_ms, "event": ev.kind.value, "dir": ev.direction.value},
        separators=(",", ":"))


def encode_snapshot(snap: dict) -> str:
    return json.dumps(snap, separators=(",", ":"))


def trace_header_line(cfg: SessionConfig) -> str:
    header = {
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config_to_dict(cfg),
    }
    return json.dumps({"header": header}, separators=(",", ":"))


class StepResult(NamedTuple):
    events: tuple[CommandEvent, ...]
    snapshot: Optional[dict]


# hook(frame_with_rewritten_t, measurement, filter_state_after, events)
FrameHook = Callable[[LandmarkFrame, GestureMeasurement, DirectionState,
                      tuple[CommandEvent, ...]], None]


class Engine:
    """Single-owner pipeline state machine. One logical thread calls step();
    the returned events and snapshot dicts are immutable values that may be
    handed to anyone."""

    def __init__(self, cfg: SessionConfig,
                 sink: Optional[Callable[[str], None]] = None,
                 frame_hook: Optional[FrameHook] = None):
        cfg.validate()
        self.cfg = cfg
        self.session_tick = 0
        self.filter_state = DirectionState()
        self.game_state = game.new_game(cfg.game)
        self._sink = sink
        self._frame_hook = frame_hook

    def command_name(self) -> str:
        held = self.filter_state.held
        return held.value if held is not None else "none"

    def _snapshot(self) -> dict:
        snap = game.snapshot_dict(self.game_state, self.cfg.game,
                                  command=self.command_name(),
                                  tick_override=self.session_tick)
        if self._sink is not None:
            self._sink(encode_snapshot(snap))
        return snap

    def begin(self) -> dict:
        """Emit and return the tick-0 snapshot of the untouched initial state."""
        return self._snapshot()

    def _feed(self, m: GestureMeasurement) -> tuple[CommandEvent, ...]:
        self.filter_state, events = filtering.step(self.filter_state, m, self.cfg.filter)
        for ev in events:
            if self._sink is not None:
                self._sink(encode_event(ev))
            self.game_state = game.apply_command(self.game_state, ev, self.cfg.game)
        return tuple(events)

    def step(self, frames: Sequence[LandmarkFrame] = ()) -> StepResult:
        """Advance one tick: drain `frames` in order, then step the game.

        A tick with no frames feeds the filter one synthetic invalid
        measurement so the no-hand release rule keeps working when the
        client stalls. Frame timestamps are rewritten to this tick's start
        time; that is what gets recorded and what events are stamped with.
        """
        tick = self.session_tick + 1
        tick_ms = timestamp_for_tick(tick, self.cfg.game.tick_hz)
        events: list[CommandEvent] = []
        if frames:
            for frame in frames:
                frame = LandmarkFrame(tick_ms, frame.hand, frame.handedness)
                if self._sink is not None:
                    self._sink(encode_frame(frame))
                oriented = mirror_frame(frame) if self.cfg.mirror_input else frame
                m = measure(oriented, self.cfg.classifier)
                frame_events = self._feed(m)
                events.extend(frame_events)
                if self._frame_hook is not None:
                    self._frame_hook(frame, m, self.filter_state, frame_events)
        else:
            events.extend(self._feed(invalid_measurement(tick_ms)))
        self.game_state = game.tick(self.game_state, self.cfg.game)
        self.session_tick = tick
        snap = self._snapshot() if tick % self.cfg.snapshot_decimation == 0 else None
        return StepResult(tuple(events), snap)


# --- trace parsing -----------------------------------------------------------

class TraceLine(NamedTuple):
    kind: str  # "header" | "frame" | "label" | "event" | "snapshot"
    obj: object  # LandmarkFrame for frames, dict otherwise


def parse_trace_line(line: str) -> Optional[TraceLine]:
    """Classify and validate one trace line; None for a blank line."""
    stripped = line.strip()
    if not stripped:
        return None
    try:
        obj = json.loads(stripped)
    except json.JSONDecodeError as e:
        raise MalformedTrace(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedTrace(f"trace line must be a JSON object: {stripped[:80]}")
    if "header" in obj:
        return TraceLine("header", obj["header"])
    if "hand" in obj:
        try:
            return TraceLine("frame", decode_frame(stripped))
        except MalformedFrame as e:
            raise MalformedTrace(f"bad frame line: {e}") from e
    if "label" in obj:
        if obj.get("label") not in LABEL_CLASSES or not isinstance(obj.get("t"), int):
            raise MalformedTrace(f"bad label line: {stripped[:80]}")
        return TraceLine("label", obj)
    if "event" in obj:
        if (obj.get("event") not in ("press", "release")
                or obj.get("dir") not in ("left", "right")
                or not isinstance(obj.get("t"), int)):
            raise MalformedTrace(f"bad event line: {stripped[:80]}")
        return TraceLine("event", obj)
    if "tick" in obj and "status" in obj:
        return TraceLine("snapshot", obj)
    raise MalformedTrace(f"unrecognized trace line: {stripped[:80]}")


def read_trace(path: str) -> tuple[Optional[dict], list[TraceLine]]:
    """Read and validate a whole trace file.

    Returns (header, lines) with the header separated out. Enforces the
    per-kind non-decreasing timestamp invariant.
    """
    header: Optional[dict] = None
    lines: list[TraceLine] = []
    last_t: dict[str, float] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as e:
        raise MalformedTrace(f"cannot read trace {path!r}: {e}") from e
    for lineno, raw in enumerate(raw_lines, start=1):
        try:
            parsed = parse_trace_line(raw)
        except MalformedTrace as e:
            raise MalformedTrace(f"{path}:{lineno}: {e}") from e
        if parsed is None:
            continue
        if parsed.kind == "header":
            if lines or header is not None:
                raise MalformedTrace(f"{path}:{lineno}: header must be the first line")
            header = parsed.obj  # type: ignore[assignment]
            continue
        if parsed.kind == "frame":
            t = parsed.obj.timestamp_ms  # type: ignore[union-attr]
        elif parsed.kind == "snapshot":
            t = parsed.obj["tick"]  # type: ignore[index]
        else:
            t = parsed.obj["t"]  # type: ignore[index]
        if t < last_t.get(parsed.kind, 0):
            raise MalformedTrace(
                f"{path}:{lineno}: {parsed.kind} timestamps went backwards")
        last_t[parsed.kind] = t
        lines.append(parsed)
    return header, lines


def schedule_frames(lines: Sequence[TraceLine],
                    tick_hz: int) -> tuple[dict[int, list[LandmarkFrame]], int]:
    """Assign a trace's frames to ticks and determine the replay duration.

    Duration is the largest tick any line implies, so a recording that ran
    past its last frame (trailing frameless ticks, visible as snapshots)
    replays for the same number of ticks it originally ran.
    """
    frames_by_tick: dict[int, list[LandmarkFrame]] = {}
    duration = 0
    for kind, obj in lines:
        if kind == "frame":
            tick = tick_for_timestamp(obj.timestamp_ms, tick_hz)
            frames_by_tick.setdefault(tick, []).append(obj)
            duration = max(duration, tick)
        elif kind == "snapshot":
            duration = max(duration, obj["tick"])
        elif kind != "header":
            duration = max(duration, tick_for_timestamp(obj["t"], tick_hz))
    return frames_by_tick, duration


def replay_trace(path: str, cfg: SessionConfig,
                 out_path: Optional[str] = None,
                 frame_hook: Optional[FrameHook] = None) -> list[dict]:
    """Feed a trace's frames through the full pipeline, no network involved.

    Frames are assigned to ticks by timestamp; every tick from 1 to the last
    line's tick is stepped, frameless ticks included, exactly as a live
    session would have run. Returns the event + snapshot log in emission
    order; with out_path also writes a full trace (header, frames, events,
    snapshots). Label lines only pin down the duration; they are eval input,
    not pipeline input.
    """
    _, lines = read_trace(path)
    frames_by_tick, duration = schedule_frames(lines, cfg.game.tick_hz)

    log: list[dict] = []
    out_fh = open(out_path, "w", encoding="utf-8") if out_path else None
    try:
        sink = None
        if out_fh is not None:
            out_fh.write(trace_header_line(cfg) + "\n")
            sink = lambda line: out_fh.write(line + "\n")
        engine = Engine(cfg, sink=sink, frame_hook=frame_hook)
        log.append(engine.begin())
        for tick in range(1, duration + 1):
            events, snap = engine.step(frames_by_tick.get(tick, ()))
            log.extend(json.loads(encode_event(ev)) for ev in events)
            if snap is not None:
                log.append(snap)
    finally:
        if out_fh is not None:
            out_fh.close()
    return log
