/** Pure canvas geometry: where everything goes for a given canvas size.
 *
 * Game coordinates are normalized: the track is y in [0,1] top to bottom,
 * obstacles and the car have heights as fractions of it, and lanes are
 * equal-width columns. The functions here map those to pixel rects so the
 * renderer contains no arithmetic worth testing.
 */

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface TrackLayout {
  /** Pixel rect of the whole track area. */
  track: Rect;
  laneWidth: number;
  lanes: number;
}

/** Fit the track into the canvas, leaving a margin for the HUD. */
export function trackLayout(
  canvasW: number,
  canvasH: number,
  lanes: number,
  margin = 0,
): TrackLayout {
  const track: Rect = {
    x: margin,
    y: margin,
    w: canvasW - 2 * margin,
    h: canvasH - 2 * margin,
  };
  return { track, laneWidth: track.w / lanes, lanes };
}

/** Pixel column of one lane (0-based, left to right). */
export function laneRect(layout: TrackLayout, lane: number): Rect {
  return {
    x: layout.track.x + lane * layout.laneWidth,
    y: layout.track.y,
    w: layout.laneWidth,
    h: layout.track.h,
  };
}

/** Rect of a body occupying `lane` with its top edge at normalized `y` and
 * normalized height `h`; both car and obstacles use this. The body is
 * drawn narrower than its lane so lane changes read clearly. */
export function bodyRect(
  layout: TrackLayout,
  lane: number,
  y: number,
  h: number,
  widthFraction = 0.6,
): Rect {
  const col = laneRect(layout, lane);
  const w = col.w * widthFraction;
  return {
    x: col.x + (col.w - w) / 2,
    y: layout.track.y + y * layout.track.h,
    w,
    h: h * layout.track.h,
  };
}

export function rectCenter(r: Rect): { x: number; y: number } {
  return { x: r.x + r.w / 2, y: r.y + r.h / 2 };
}

/** Top-right command badge text. */
export function badgeText(command: "none" | "left" | "right"): string {
  if (command === "left") return "LEFT";
  if (command === "right") return "RIGHT";
  return "-";
}

/** Crash overlay line. restart_in is in ticks; the wire does not carry the
 * tick rate, so the count is shown as-is and visibly runs down. */
export function countdownText(restartIn: number): string {
  return `CRASHED  restart in ${restartIn}`;
}

export function scoreText(score: number, best: number): string {
  return `score ${score}   best ${best}`;
}
