"""Offline evaluation: scoring the classifier + filter against labeled traces,
threshold sweeps, and the scripted end-to-end scenario suite.

Ground truth is per-frame: label lines state which class ("left", "right",
"neutral", "none") the frame at or just before their timestamp belongs to.
Event expectations are derived from label transitions, so an annotator only
has to mark spans, never individual edges.
"""
from __future__ import annotations

import bisect
import dataclasses
import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from . import game
from .classifier import GestureMeasurement
from .config import SessionConfig
from .engine import Engine, TraceLine, read_trace, schedule_frames, timestamp_for_tick
from .filtering import CommandEvent, DirectionState
from .landmarks import NUM_LANDMARKS, LandmarkFrame, LandmarkIndex, Point2D, mirror_frame

CLASSES = ("left", "right", "neutral", "none")
_CLASS_INDEX = {c: i for i, c in enumerate(CLASSES)}


class NoLabels(ValueError):
    """The trace contains no label lines to score against."""


@dataclass(frozen=True)
class EvalMetrics:
    per_frame_accuracy: float
    confusion: tuple[tuple[int, ...], ...]  # rows: true class, cols: predicted
    onset_latency_frames: tuple[int, ...]   # one entry per matched transition
    unmatched_transitions: int
    event_edit_distance: int
    frame_count: int
    label_count: int
    event_count: int

    def mean_onset_latency(self) -> Optional[float]:
        if not self.onset_latency_frames:
            return None
        return sum(self.onset_latency_frames) / len(self.onset_latency_frames)

    def to_dict(self) -> dict:
        return {
            "per_frame_accuracy": self.per_frame_accuracy,
            "classes": list(CLASSES),
            "confusion": [list(row) for row in self.confusion],
            "onset_latency_frames": list(self.onset_latency_frames),
            "mean_onset_latency": self.mean_onset_latency(),
            "unmatched_transitions": self.unmatched_transitions,
            "event_edit_distance": self.event_edit_distance,
            "frame_count": self.frame_count,
            "label_count": self.label_count,
            "event_count": self.event_count,
        }


class _FrameRecord(NamedTuple):
    t: int                # the frame's timestamp as written in the trace
    predicted: str
    events: tuple[CommandEvent, ...]


def _run_pipeline(lines: Sequence[TraceLine],
                  cfg: SessionConfig) -> tuple[list[_FrameRecord], list[CommandEvent]]:
    """Drive the engine over the trace, recording per-frame predictions.

    The predicted class of a frame is the filter's stable state right after
    consuming it: the held direction, else "neutral" for a valid hand, else
    "none".
    """
    original = [obj for kind, obj in lines if kind == "frame"]
    frames_by_tick, duration = schedule_frames(lines, cfg.game.tick_hz)

    records: list[_FrameRecord] = []
    all_events: list[CommandEvent] = []

    def hook(frame: LandmarkFrame, m: GestureMeasurement,
             state: DirectionState, events: tuple[CommandEvent, ...]) -> None:
        if state.held is not None:
            predicted = state.held.value
        elif m.valid:
            predicted = "neutral"
        else:
            predicted = "none"
        # hook calls arrive in trace order; recover the pre-rewrite timestamp
        records.append(_FrameRecord(original[len(records)].timestamp_ms,
                                    predicted, events))

    run_cfg = dataclasses.replace(cfg, trace_out=None)
    engine = Engine(run_cfg, frame_hook=hook)
    engine.begin()
    for tick in range(1, duration + 1):
        result = engine.step(frames_by_tick.get(tick, ()))
        all_events.extend(result.events)
    return records, all_events


def _expected_events(labels: list[tuple[int, str]]) -> list[tuple[int, str, str]]:
    """Derive (label_index, kind, dir) expectations from label transitions.

    The implicit state before the first label is "neutral". Entering a
    direction expects a press; leaving one expects a release first.
    """
    expected: list[tuple[int, str, str]] = []
    prev = "neutral"
    for i, (_, label) in enumerate(labels):
        cur = "neutral" if label == "none" else label
        if cur == prev:
            continue
        if prev in ("left", "right"):
            expected.append((i, "release", prev))
        if cur in ("left", "right"):
            expected.append((i, "press", cur))
        prev = cur
    return expected


def _edit_distance(a: Sequence, b: Sequence) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def evaluate_lines(lines: Sequence[TraceLine], cfg: SessionConfig) -> EvalMetrics:
    labels = [(obj["t"], obj["label"]) for kind, obj in lines if kind == "label"]
    if not labels:
        raise NoLabels("trace has no label lines")

    records, events = _run_pipeline(lines, cfg)
    frame_ts = [r.t for r in records]

    # per-frame agreement: each label scores the latest frame at or before it
    confusion = [[0] * len(CLASSES) for _ in CLASSES]
    label_frame_idx: list[int] = []
    for t, label in labels:
        idx = bisect.bisect_right(frame_ts, t) - 1
        label_frame_idx.append(idx)
        predicted = records[idx].predicted if idx >= 0 else "none"
        confusion[_CLASS_INDEX[label]][_CLASS_INDEX[predicted]] += 1
    correct = sum(confusion[i][i] for i in range(len(CLASSES)))
    accuracy = correct / len(labels)

    # transitions: latency from the label-change frame to the matching event
    expected = _expected_events(labels)
    produced = [(fi, ev.kind.value, ev.direction.value)
                for fi, rec in enumerate(records) for ev in rec.events]
    latencies: list[int] = []
    unmatched = 0
    cursor = 0
    for label_idx, kind, direction in expected:
        start_frame = max(0, label_frame_idx[label_idx])
        found = None
        for p in range(cursor, len(produced)):
            frame_idx, pkind, pdir = produced[p]
            if frame_idx >= start_frame and (pkind, pdir) == (kind, direction):
                found = p
                break
        if found is None:
            unmatched += 1
            continue
        cursor = found + 1
        # presses complete an entering transition; releases a leaving one
        latencies.append(produced[found][0] - start_frame + 1)

    distance = _edit_distance([(k, d) for _, k, d in expected],
                              [(ev.kind.value, ev.direction.value) for ev in events])

    return EvalMetrics(
        per_frame_accuracy=accuracy,
        confusion=tuple(tuple(row) for row in confusion),
        onset_latency_frames=tuple(latencies),
        unmatched_transitions=unmatched,
        event_edit_distance=distance,
        frame_count=len(records),
        label_count=len(labels),
        event_count=len(events),
    )


def evaluate_trace(path: str, cfg: SessionConfig) -> EvalMetrics:
    _, lines = read_trace(path)
    return evaluate_lines(lines, cfg)


# --- threshold sweep ---------------------------------------------------------

class SweepRow(NamedTuple):
    enter_deg: float
    exit_deg: float
    debounce_frames: int
    metrics: EvalMetrics


def load_grid(path: str) -> list[dict]:
    """Read a sweep grid file. Two JSON shapes are accepted:

    a list of points: [{"enter_deg":20,"exit_deg":12,"debounce_frames":3}, ...]
    or axes to cross: {"enter_deg":[15,20],"exit_deg":[8,12],"debounce_frames":[1,3]}
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, list):
        points = data
    elif isinstance(data, dict):
        axes = {k: data.get(k) for k in ("enter_deg", "exit_deg", "debounce_frames")}
        if any(not isinstance(v, list) or not v for v in axes.values()):
            raise ValueError("grid object needs non-empty lists for "
                             "enter_deg, exit_deg, debounce_frames")
        points = [
            {"enter_deg": e, "exit_deg": x, "debounce_frames": d}
            for e in axes["enter_deg"] for x in axes["exit_deg"]
            for d in axes["debounce_frames"]
        ]
    else:
        raise ValueError("grid file must hold a JSON list or object")
    for p in points:
        if not isinstance(p, dict) or set(p) - {"enter_deg", "exit_deg", "debounce_frames"}:
            raise ValueError(f"bad grid point: {p!r}")
    return points


def sweep_thresholds(path: str, cfg: SessionConfig,
                     grid: Sequence[dict]) -> list[SweepRow]:
    """One evaluation per grid point; invalid combinations are skipped only
    by failing loudly, not silently, since a typo'd grid is a user error."""
    _, lines = read_trace(path)
    rows: list[SweepRow] = []
    for point in grid:
        fc = dataclasses.replace(cfg.filter, **point)
        fc.validate()
        point_cfg = dataclasses.replace(cfg, filter=fc)
        rows.append(SweepRow(fc.enter_deg, fc.exit_deg, fc.debounce_frames,
                             evaluate_lines(lines, point_cfg)))
    return rows


# --- synthetic frames and the scripted scenario suite -------------------------

def synthetic_hand(tilt_deg: float) -> list[Point2D]:
    """A full 21-point hand whose index finger is straight (extension 180)
    and tilted tilt_deg from image-up. Non-index landmarks are plausible
    filler; classification never reads them."""
    rad = math.radians(tilt_deg)
    ux, uy = math.sin(rad), -math.cos(rad)  # unit vector of the finger
    mcp = Point2D(0.5, 0.55)
    wrist = Point2D(mcp.x - 0.25 * ux, mcp.y - 0.25 * uy)
    tip = Point2D(mcp.x + 0.20 * ux, mcp.y + 0.20 * uy)
    points = [Point2D(wrist.x + 0.02 * i, wrist.y + 0.01 * i) for i in range(NUM_LANDMARKS)]
    points[LandmarkIndex.WRIST] = wrist
    points[LandmarkIndex.INDEX_FINGER_MCP] = mcp
    points[LandmarkIndex.INDEX_FINGER_TIP] = tip
    points[LandmarkIndex.INDEX_FINGER_PIP] = Point2D(mcp.x + 0.07 * ux, mcp.y + 0.07 * uy)
    points[LandmarkIndex.INDEX_FINGER_DIP] = Point2D(mcp.x + 0.14 * ux, mcp.y + 0.14 * uy)
    return points


def tilt_frame(t_ms: int, tilt_deg: float, *, premirror: bool = False) -> LandmarkFrame:
    """Frame whose measured tilt is tilt_deg. With premirror=True the frame
    is built so an engine configured with mirror_input sees tilt_deg after
    its own mirroring (what a real camera feed looks like)."""
    frame = LandmarkFrame(timestamp_ms=t_ms, hand=tuple(synthetic_hand(tilt_deg)))
    return mirror_frame(frame) if premirror else frame


class UatRow(NamedTuple):
    name: str
    passed: bool
    detail: str


class _ScriptedRun:
    """Step the engine one tick at a time, optionally with one frame per tick."""

    def __init__(self, cfg: SessionConfig):
        self.cfg = dataclasses.replace(cfg, snapshot_decimation=1, trace_out=None)
        self.engine = Engine(self.cfg)
        self.snapshots = [self.engine.begin()]
        self.events: list[CommandEvent] = []

    def tick(self, tilt_deg: Optional[float] = None) -> dict:
        frames = ()
        if tilt_deg is not None:
            t_ms = timestamp_for_tick(self.engine.session_tick + 1, self.cfg.game.tick_hz)
            frames = (tilt_frame(t_ms, tilt_deg, premirror=self.cfg.mirror_input),)
        result = self.engine.step(frames)
        self.events.extend(result.events)
        self.snapshots.append(result.snapshot)
        return result.snapshot

    def hold(self, tilt_deg: Optional[float], ticks: int) -> None:
        for _ in range(ticks):
            self.tick(tilt_deg)


def _first_spawn_lane(cfg: SessionConfig) -> int:
    state = game.new_game(cfg.game)
    for _ in range(cfg.game.spawn_period_ticks + 1):
        state = game.tick(state, cfg.game)
        if state.obstacles:
            return state.obstacles[0].lane
    raise AssertionError("no spawn within one spawn period")


def _uat_gesture_detection(cfg: SessionConfig) -> UatRow:
    run = _ScriptedRun(cfg)
    hold = cfg.filter.debounce_frames + 2
    run.hold(-2 * cfg.filter.enter_deg, hold)
    pressed = [ev for ev in run.events if ev.kind.value == "press"]
    held_cmd = run.snapshots[-1]["command"]
    ok = (len(pressed) == 1 and pressed[0].direction.value == "left"
          and held_cmd == "left")
    return UatRow(
        "gesture detection",
        ok,
        f"left tilt held {hold} frames -> presses={[(e.kind.value, e.direction.value) for e in pressed]}, "
        f"held command {held_cmd!r}")


def _uat_car_movement(cfg: SessionConfig) -> UatRow:
    run = _ScriptedRun(cfg)
    start = run.snapshots[0]["car_lane"]
    hold = cfg.filter.debounce_frames + 2
    run.hold(-2 * cfg.filter.enter_deg, hold)
    after_left = run.snapshots[-1]["car_lane"]
    run.hold(+2 * cfg.filter.enter_deg, hold)
    after_right = run.snapshots[-1]["car_lane"]
    want_left = max(0, start - 1)
    want_right = min(cfg.game.lanes - 1, want_left + 1)
    kinds = [(ev.kind.value, ev.direction.value) for ev in run.events]
    ok = (after_left == want_left and after_right == want_right
          and ("press", "left") in kinds and ("press", "right") in kinds)
    return UatRow(
        "car movement",
        ok,
        f"lane {start} -> {after_left} (left) -> {after_right} (right), events {kinds}")


def _uat_game_mechanics(cfg: SessionConfig) -> UatRow:
    run = _ScriptedRun(cfg)
    target = _first_spawn_lane(cfg)
    hold = cfg.filter.debounce_frames + 2

    # steer into the first obstacle's lane to force a head-on crash
    while run.snapshots[-1]["car_lane"] != target:
        tilt = 2 * cfg.filter.enter_deg
        if run.snapshots[-1]["car_lane"] > target:
            tilt = -tilt
        run.hold(tilt, hold)   # press: one lane hop
        run.hold(0.0, hold)    # release so the next hop can press again

    crash_tick = None
    limit = 10 * cfg.game.spawn_period_ticks + cfg.game.auto_restart_delay_ticks
    while run.engine.session_tick < limit:
        snap = run.tick(None)
        if snap["status"] == "crashed" and crash_tick is None:
            crash_tick = snap["tick"]
            best_at_crash = snap["best"]
        if crash_tick is not None and snap["status"] == "running":
            restart_tick = snap["tick"]
            gap = restart_tick - crash_tick
            want_gap = max(1, cfg.game.auto_restart_delay_ticks)
            ok = (gap == want_gap and snap["score"] == 0
                  and snap["best"] == best_at_crash)
            return UatRow(
                "game mechanics",
                ok,
                f"crash at tick {crash_tick}, fresh run at {restart_tick} "
                f"(gap {gap}, wanted {want_gap}), score {snap['score']}, "
                f"best kept {snap['best']}")
    return UatRow("game mechanics", False,
                  f"no crash+restart within {limit} ticks")


def uat_suite(cfg: SessionConfig) -> list[UatRow]:
    """Three scripted end-to-end scenarios on synthetic input: a tilt hold is
    detected as the matching command, tilts move the car lane by lane, and a
    head-on collision crashes then auto-restarts after the configured delay."""
    return [
        _uat_gesture_detection(cfg),
        _uat_car_movement(cfg),
        _uat_game_mechanics(cfg),
    ]
