"""Independent reference implementations used to cross-check the engine.

Everything in this file is deliberately written from first principles and
must stay decoupled from the tiltlane package: the tests compare the
package against these oracles, so sharing code would defeat the point.
"""
from __future__ import annotations

import mpmath as mp

mp.mp.dps = 30


# --- high-precision angle oracles -----------------------------------------

def tilt_oracle_deg(mcp, tip):
    """Signed inclination of mcp->tip versus image-up, via arccos plus a sign.

    Independent derivation: instead of a two-argument arctangent, take the
    unsigned angle from the up direction with arccos and attach the sign of
    the horizontal component (straight-down resolves to +180).
    """
    dx = mp.mpf(tip[0]) - mp.mpf(mcp[0])
    dy = mp.mpf(tip[1]) - mp.mpf(mcp[1])
    r = mp.sqrt(dx * dx + dy * dy)
    if r == 0:
        raise ZeroDivisionError("coincident points")
    # cosine of angle to image-up (0, -1)
    c = (-dy) / r
    c = max(mp.mpf(-1), min(mp.mpf(1), c))
    unsigned = mp.degrees(mp.acos(c))
    if dx > 0:
        return unsigned
    if dx < 0:
        return -unsigned
    return unsigned  # dx == 0: 0 for up, +180 for down


def vertex_oracle_deg(wrist, mcp, tip):
    """Interior angle at mcp, via the law of cosines on the three side lengths."""
    ax, ay = mp.mpf(wrist[0]), mp.mpf(wrist[1])
    bx, by = mp.mpf(mcp[0]), mp.mpf(mcp[1])
    cx, cy = mp.mpf(tip[0]), mp.mpf(tip[1])
    a = mp.sqrt((bx - ax) ** 2 + (by - ay) ** 2)  # mcp-wrist
    b = mp.sqrt((bx - cx) ** 2 + (by - cy) ** 2)  # mcp-tip
    c = mp.sqrt((ax - cx) ** 2 + (ay - cy) ** 2)  # wrist-tip
    if a == 0 or b == 0:
        raise ZeroDivisionError("degenerate segment")
    cosv = (a * a + b * b - c * c) / (2 * a * b)
    cosv = max(mp.mpf(-1), min(mp.mpf(1), cosv))
    return mp.degrees(mp.acos(cosv))


def angle_diff_deg(a, b):
    """Distance between two angles in degrees, wrapped to [0, 180]."""
    d = mp.fmod(mp.mpf(a) - mp.mpf(b), 360)
    if d > 180:
        d -= 360
    if d < -180:
        d += 360
    return abs(d)


# --- collision oracle -------------------------------------------------------

def collision_oracle(car_lane, car_y, car_height, obstacles, obstacle_height):
    """Exhaustive pairwise check: same lane and strictly positive interval overlap.

    obstacles: iterable of (lane, y) pairs.
    """
    for lane, y in obstacles:
        if lane != car_lane:
            continue
        lo = max(y, car_y)
        hi = min(y + obstacle_height, car_y + car_height)
        if hi - lo > 0:
            return True
    return False


# --- reference game simulation ----------------------------------------------

MASK64 = (1 << 64) - 1
SPEED_FACTOR_CAP = 3.0


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return state, z


class ReferenceSim:
    """Straight-line re-derivation of the game rules, one mutable object.

    Tick order: speed from score at tick start; move; mark passes; drop
    off-screen; spawn on period; collision check. Crash starts a countdown;
    when it runs out the run restarts fresh except best score and rng.
    """

    def __init__(self, lanes=3, spawn_period_ticks=90, base_speed=0.007,
                 speed_growth=1.05, car_y=0.85, car_height=0.10,
                 obstacle_height=0.10, auto_restart_delay_ticks=120,
                 rng_seed=42):
        self.lanes = lanes
        self.spawn_period_ticks = spawn_period_ticks
        self.base_speed = base_speed
        self.speed_growth = speed_growth
        self.car_y = car_y
        self.car_height = car_height
        self.obstacle_height = obstacle_height
        self.auto_restart_delay_ticks = auto_restart_delay_ticks
        self.rng_state = rng_seed & MASK64
        self.crash_count = 0
        self._fresh_run()

    def _fresh_run(self):
        self.tick_count = 0
        self.crashed = False
        self.restart_in = 0
        self.car_lane = self.lanes // 2
        self.obstacles = []  # list of [lane, y, passed]
        self.score = 0
        if not hasattr(self, "best_score"):
            self.best_score = 0

    def move(self, direction):
        if self.crashed:
            return
        if direction == "left":
            self.car_lane = max(0, self.car_lane - 1)
        elif direction == "right":
            self.car_lane = min(self.lanes - 1, self.car_lane + 1)

    def step(self):
        if self.crashed:
            self.restart_in -= 1
            if self.restart_in <= 0:
                self._fresh_run()
            else:
                self.tick_count += 1
            return
        factor = min(self.speed_growth ** (self.score // 10), SPEED_FACTOR_CAP)
        speed = self.base_speed * factor
        for ob in self.obstacles:
            ob[1] += speed
        for ob in self.obstacles:
            if not ob[2] and ob[1] > self.car_y + self.car_height:
                ob[2] = True
                self.score += 1
        self.obstacles = [ob for ob in self.obstacles if ob[1] <= 1.0]
        self.tick_count += 1
        if self.tick_count % self.spawn_period_ticks == 0:
            self.rng_state, z = splitmix64(self.rng_state)
            self.obstacles.append([z % self.lanes, -self.obstacle_height, False])
        if collision_oracle(self.car_lane, self.car_y, self.car_height,
                            [(ob[0], ob[1]) for ob in self.obstacles],
                            self.obstacle_height):
            self.crashed = True
            self.restart_in = self.auto_restart_delay_ticks
            self.best_score = max(self.best_score, self.score)
            self.crash_count += 1

    def summary(self):
        return {
            "tick": self.tick_count,
            "status": "crashed" if self.crashed else "running",
            "car_lane": self.car_lane,
            "score": self.score,
            "best": self.best_score,
            "obstacles": [(ob[0], round(ob[1], 9)) for ob in self.obstacles],
            "crash_count": self.crash_count,
        }


if __name__ == "__main__":
    sim = ReferenceSim()
    for _ in range(2000):
        sim.step()
    print("after 2000 ticks:", sim.summary())
