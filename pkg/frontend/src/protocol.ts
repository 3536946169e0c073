/** Wire protocol shared with the game server.
 *
 * Everything on the socket is one JSON object per line of text. Outbound:
 * landmark frames. Inbound: game state snapshots and press/release command
 * events. Frames are validated here before send, so a buggy tracker can
 * never put a malformed line on the wire, and inbound lines that do not
 * parse as a known kind are dropped rather than crashing the render loop.
 *
 * The server treats webcam coordinates as the mirror image the user sees;
 * nothing in this client flips x. Orientation is the server's job.
 */

export const NUM_LANDMARKS = 21;

// Coordinates may drift this far outside [0,1] (hand partially off-frame).
export const COORD_SLACK = 0.5;

export type HandPoint = [number, number] | [number, number, number];

export type Handedness = "left" | "right";

export interface ObstacleView {
  lane: number;
  y: number;
}

export type GameStatus = "running" | "crashed";

export type Command = "none" | "left" | "right";

export interface Snapshot {
  tick: number;
  status: GameStatus;
  restart_in: number;
  car_lane: number;
  lanes: number;
  obstacles: ObstacleView[];
  score: number;
  best: number;
  command: Command;
}

export interface CommandEvent {
  t: number;
  event: "press" | "release";
  dir: "left" | "right";
}

export type ServerMessage =
  | { kind: "snapshot"; snapshot: Snapshot }
  | { kind: "event"; event: CommandEvent };

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function coordOk(v: unknown): boolean {
  return isFiniteNumber(v) && v >= -COORD_SLACK && v <= 1 + COORD_SLACK;
}

/** Validate a hand as exactly 21 in-range points. z is optional and
 * unconstrained; the server ignores it. */
export function validHand(hand: unknown): hand is HandPoint[] {
  if (!Array.isArray(hand) || hand.length !== NUM_LANDMARKS) return false;
  for (const p of hand) {
    if (!Array.isArray(p) || (p.length !== 2 && p.length !== 3)) return false;
    if (!coordOk(p[0]) || !coordOk(p[1])) return false;
    if (p.length === 3 && !isFiniteNumber(p[2])) return false;
  }
  return true;
}

/** Encode one frame line, or return null if the inputs would be rejected
 * by the server. Timestamps are integral non-negative milliseconds. */
export function encodeFrame(
  timestampMs: number,
  hand: HandPoint[] | null,
  handedness?: Handedness,
): string | null {
  if (!Number.isInteger(timestampMs) || timestampMs < 0) return null;
  if (hand !== null && !validHand(hand)) return null;
  const msg: Record<string, unknown> = { t: timestampMs, hand };
  if (handedness !== undefined) msg.handedness = handedness;
  return JSON.stringify(msg);
}

function isObstacle(v: unknown): v is ObstacleView {
  if (typeof v !== "object" || v === null) return false;
  const o = v as Record<string, unknown>;
  return Number.isInteger(o.lane) && isFiniteNumber(o.y);
}

function asSnapshot(o: Record<string, unknown>): Snapshot | null {
  if (
    !Number.isInteger(o.tick) ||
    (o.status !== "running" && o.status !== "crashed") ||
    !Number.isInteger(o.restart_in) ||
    !Number.isInteger(o.car_lane) ||
    !Number.isInteger(o.lanes) ||
    !Array.isArray(o.obstacles) ||
    !o.obstacles.every(isObstacle) ||
    !Number.isInteger(o.score) ||
    !Number.isInteger(o.best) ||
    (o.command !== "none" && o.command !== "left" && o.command !== "right")
  ) {
    return null;
  }
  return o as unknown as Snapshot;
}

function asEvent(o: Record<string, unknown>): CommandEvent | null {
  if (
    !Number.isInteger(o.t) ||
    (o.event !== "press" && o.event !== "release") ||
    (o.dir !== "left" && o.dir !== "right")
  ) {
    return null;
  }
  return o as unknown as CommandEvent;
}

/** Classify one inbound line. Returns null for anything unrecognized:
 * unknown kinds are forward compatibility, not errors. */
export function parseServerLine(line: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) return null;
  const o = obj as Record<string, unknown>;
  if ("status" in o) {
    const snapshot = asSnapshot(o);
    return snapshot ? { kind: "snapshot", snapshot } : null;
  }
  if ("event" in o) {
    const event = asEvent(o);
    return event ? { kind: "event", event } : null;
  }
  return null;
}
