"""Deterministic fixed-timestep lane game.

A car sits in one of a few discrete lanes near the bottom of a normalized
track; obstacles descend from the top. One press moves one lane. Strictly
overlapping an obstacle crashes the run; after a fixed countdown the run
restarts on its own, keeping the best score and the generator state.

All operations are pure: they take a GameState and return a new one, so a
snapshot handed to another thread can never change underneath it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .filtering import CommandEvent, Direction, EventKind

_MASK64 = (1 << 64) - 1
SPEED_FACTOR_CAP = 3.0


class InvalidConfig(ValueError):
    pass


@dataclass(frozen=True)
class GameConfig:
    lanes: int = 3
    tick_hz: int = 60
    spawn_period_ticks: int = 90
    base_speed: float = 0.007       # normalized track units per tick
    speed_growth: float = 1.05      # multiplied in once per 10 score, capped x3
    car_y: float = 0.85             # top edge of the car's fixed vertical band
    car_height: float = 0.10
    obstacle_height: float = 0.10
    auto_restart_delay_ticks: int = 120
    rng_seed: int = 42

    def validate(self) -> None:
        if not (2 <= self.lanes <= 7):
            raise InvalidConfig(f"lanes must be in 2..7, got {self.lanes}")
        if not (1 <= self.tick_hz <= 1000):
            # above 1000 Hz distinct ticks collide in millisecond timestamps,
            # breaking the trace frame-to-tick round trip
            raise InvalidConfig(f"tick_hz must be in 1..1000, got {self.tick_hz}")
        if self.spawn_period_ticks < 1:
            raise InvalidConfig("spawn_period_ticks must be >= 1")
        if self.auto_restart_delay_ticks < 0:
            # 0 is a legal degenerate delay: restart on the tick after the crash
            raise InvalidConfig("auto_restart_delay_ticks must be >= 0")
        if not (self.base_speed > 0):
            raise InvalidConfig("base_speed must be > 0")
        if not (self.speed_growth > 0):
            raise InvalidConfig("speed_growth must be > 0")
        if not (self.car_height > 0 and self.obstacle_height > 0):
            raise InvalidConfig("car_height and obstacle_height must be > 0")
        if self.car_y + self.car_height > 1:
            raise InvalidConfig("car band must fit on the track: car_y + car_height <= 1")


class Status(Enum):
    RUNNING = "running"
    CRASHED = "crashed"


@dataclass(frozen=True)
class Obstacle:
    lane: int
    y: float          # top edge, 0 at top of screen, grows downward
    id: int           # unique within a run, ascending spawn order
    passed: bool = False


@dataclass(frozen=True)
class GameState:
    tick: int
    status: Status
    restart_in: int          # countdown while CRASHED, 0 while RUNNING
    car_lane: int
    obstacles: tuple[Obstacle, ...]
    score: int
    best_score: int          # survives auto-restarts
    rng_state: int
    next_obstacle_id: int


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return state, z


def new_game(cfg: GameConfig) -> GameState:
    cfg.validate()
    return GameState(
        tick=0,
        status=Status.RUNNING,
        restart_in=0,
        car_lane=cfg.lanes // 2,
        obstacles=(),
        score=0,
        best_score=0,
        rng_state=cfg.rng_seed & _MASK64,
        next_obstacle_id=0,
    )


def apply_command(state: GameState, ev: CommandEvent, cfg: GameConfig) -> GameState:
    """Press moves one lane, clamped at the edges. Releases are no-ops: the
    movement model is one hop per press, not held-key autorepeat. A crashed
    car ignores commands until the restart."""
    if state.status is Status.CRASHED or ev.kind is not EventKind.PRESS:
        return state
    if ev.direction is Direction.LEFT:
        lane = max(0, state.car_lane - 1)
    else:
        lane = min(cfg.lanes - 1, state.car_lane + 1)
    return replace(state, car_lane=lane)


def current_speed(state: GameState, cfg: GameConfig) -> float:
    factor = min(cfg.speed_growth ** (state.score // 10), SPEED_FACTOR_CAP)
    return cfg.base_speed * factor


def check_collision(state: GameState, cfg: GameConfig) -> bool:
    """True iff some obstacle shares the car's lane and the vertical
    intervals overlap with positive measure. Touching edges is not a hit."""
    car_top = cfg.car_y
    car_bot = cfg.car_y + cfg.car_height
    for ob in state.obstacles:
        if ob.lane != state.car_lane:
            continue
        if min(ob.y + cfg.obstacle_height, car_bot) - max(ob.y, car_top) > 0:
            return True
    return False


def tick(state: GameState, cfg: GameConfig) -> GameState:
    if state.status is Status.CRASHED:
        remaining = state.restart_in - 1
        if remaining <= 0:
            fresh = new_game(cfg)
            return replace(fresh, best_score=state.best_score,
                           rng_state=state.rng_state)
        return replace(state, tick=state.tick + 1, restart_in=remaining)

    speed = current_speed(state, cfg)
    moved = [replace(ob, y=ob.y + speed) for ob in state.obstacles]

    score = state.score
    pass_line = cfg.car_y + cfg.car_height
    for i, ob in enumerate(moved):
        if not ob.passed and ob.y > pass_line:
            moved[i] = replace(ob, passed=True)
            score += 1

    kept = [ob for ob in moved if ob.y <= 1.0]

    tick_count = state.tick + 1
    rng_state = state.rng_state
    next_id = state.next_obstacle_id
    if tick_count % cfg.spawn_period_ticks == 0:
        rng_state, z = _splitmix64(rng_state)
        kept.append(Obstacle(lane=z % cfg.lanes, y=-cfg.obstacle_height, id=next_id))
        next_id += 1

    out = replace(state, tick=tick_count, obstacles=tuple(kept), score=score,
                  rng_state=rng_state, next_obstacle_id=next_id)
    if check_collision(out, cfg):
        out = replace(out, status=Status.CRASHED,
                      restart_in=cfg.auto_restart_delay_ticks,
                      best_score=max(out.best_score, out.score))
    return out


def snapshot_dict(state: GameState, cfg: GameConfig, *, command: str = "none",
                  tick_override: Optional[int] = None) -> dict:
    """Wire-format snapshot of one state. The caller may substitute a
    session-monotone tick so clients see a counter that never rewinds
    across auto-restarts."""
    return {
        "tick": state.tick if tick_override is None else tick_override,
        "status": state.status.value,
        "restart_in": state.restart_in,
        "car_lane": state.car_lane,
        "lanes": cfg.lanes,
        "obstacles": [{"lane": ob.lane, "y": ob.y} for ob in state.obstacles],
        "score": state.score,
        "best": state.best_score,
        "command": command,
    }
