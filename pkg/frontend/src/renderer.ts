/** Canvas renderer. Every pixel of game content comes from the last
 * snapshot; nothing here advances or predicts game state. A stale snapshot
 * just gets drawn again until the next one lands. */
import {
  badgeText,
  bodyRect,
  countdownText,
  laneRect,
  scoreText,
  trackLayout,
  type Rect,
} from "./layout.js";
import type { HandPoint, Snapshot } from "./protocol.js";

// Matches the server's fixed car geometry; only used for drawing, never
// for rules.
const CAR_Y = 0.85;
const CAR_H = 0.1;
const OBSTACLE_H = 0.1;

const COLORS = {
  background: "#101418",
  laneLine: "#2a3138",
  car: "#4fc3f7",
  carCrashed: "#ef5350",
  obstacle: "#ffb74d",
  text: "#e0e6ea",
  badge: "#80cbc4",
  overlay: "rgba(16, 20, 24, 0.75)",
  landmark: "rgba(129, 199, 132, 0.9)",
};

function fillRect(ctx: CanvasRenderingContext2D, r: Rect, color: string): void {
  ctx.fillStyle = color;
  ctx.fillRect(r.x, r.y, r.w, r.h);
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  snapshot: Snapshot | null,
  overlayHand: HandPoint[] | null,
): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);

  if (snapshot === null) {
    ctx.fillStyle = COLORS.text;
    ctx.font = "20px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("waiting for game state", width / 2, height / 2);
    ctx.textAlign = "left";
    return;
  }

  const layout = trackLayout(width, height, snapshot.lanes);

  ctx.strokeStyle = COLORS.laneLine;
  ctx.lineWidth = 2;
  for (let lane = 1; lane < snapshot.lanes; lane++) {
    const col = laneRect(layout, lane);
    ctx.beginPath();
    ctx.moveTo(col.x, col.y);
    ctx.lineTo(col.x, col.y + col.h);
    ctx.stroke();
  }

  for (const ob of snapshot.obstacles) {
    fillRect(ctx, bodyRect(layout, ob.lane, ob.y, OBSTACLE_H), COLORS.obstacle);
  }

  const crashed = snapshot.status === "crashed";
  fillRect(
    ctx,
    bodyRect(layout, snapshot.car_lane, CAR_Y, CAR_H),
    crashed ? COLORS.carCrashed : COLORS.car,
  );

  ctx.fillStyle = COLORS.text;
  ctx.font = "16px system-ui, sans-serif";
  ctx.fillText(scoreText(snapshot.score, snapshot.best), 12, 24);

  ctx.fillStyle = COLORS.badge;
  ctx.font = "bold 20px system-ui, sans-serif";
  ctx.textAlign = "right";
  ctx.fillText(badgeText(snapshot.command), width - 12, 28);
  ctx.textAlign = "left";

  if (overlayHand !== null) {
    ctx.fillStyle = COLORS.landmark;
    for (const p of overlayHand) {
      ctx.beginPath();
      ctx.arc(p[0] * width, p[1] * height, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  if (crashed) {
    ctx.fillStyle = COLORS.overlay;
    ctx.fillRect(0, height / 2 - 40, width, 80);
    ctx.fillStyle = COLORS.text;
    ctx.font = "bold 24px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(countdownText(snapshot.restart_in), width / 2, height / 2 + 8);
    ctx.textAlign = "left";
  }
}
