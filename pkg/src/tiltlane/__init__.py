"""tiltlane: a gesture-steered lane-dodging game engine.

Hand-landmark frames come in over a websocket or from trace files; debounced
left/right command events and deterministic game snapshots come out. The
pipeline is landmarks -> angle measurement -> hysteresis/debounce filter ->
fixed-timestep game, every stage pure and replayable.
"""
from .classifier import (ClassifierConfig, DegeneratePoints, GestureMeasurement,
                         measure, tilt_angle, vertex_angle)
from .config import ConfigError, SessionConfig, load_config
from .engine import Engine, MalformedTrace, read_trace, replay_trace
from .evaluate import EvalMetrics, NoLabels, evaluate_trace, sweep_thresholds, uat_suite
from .filtering import (CommandEvent, Direction, DirectionState, EventKind,
                        FilterConfig)
from .game import (GameConfig, GameState, InvalidConfig, Obstacle, Status,
                   apply_command, check_collision, new_game, snapshot_dict, tick)
from .landmarks import (Handedness, LandmarkFrame, LandmarkIndex, MalformedFrame,
                        Point2D, decode_frame, encode_frame, mirror_frame)
from .server import LoopStats, run_session, run_timed_loop

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig", "CommandEvent", "ConfigError", "DegeneratePoints",
    "Direction", "DirectionState", "Engine", "EvalMetrics", "EventKind",
    "FilterConfig", "GameConfig", "GameState", "GestureMeasurement",
    "Handedness", "InvalidConfig", "LandmarkFrame", "LandmarkIndex",
    "LoopStats", "MalformedFrame", "MalformedTrace", "NoLabels", "Obstacle",
    "Point2D", "SessionConfig", "Status", "apply_command", "check_collision",
    "decode_frame", "encode_frame", "evaluate_trace", "load_config",
    "measure", "mirror_frame", "new_game", "read_trace", "replay_trace",
    "run_session", "run_timed_loop", "snapshot_dict", "sweep_thresholds",
    "tick", "tilt_angle", "uat_suite", "vertex_angle",
]
