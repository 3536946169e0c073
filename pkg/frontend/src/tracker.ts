/** In-browser hand landmark extraction via MediaPipe HandLandmarker.
 *
 * Wraps model loading and per-video-frame detection into "give me 21
 * points or null". Coordinates pass through exactly as the model reports
 * them: normalized to the image, unmirrored. The server decides
 * orientation.
 */
import { FilesetResolver, HandLandmarker } from "@mediapipe/tasks-vision";
import type { HandPoint, Handedness } from "./protocol.js";

// Local copy shipped with the npm package; works without internet.
const WASM_BASE = "./node_modules/@mediapipe/tasks-vision/wasm";
// The model itself is not in the package; fetched once and cached by the
// browser. Override via ?model=<url> for fully offline setups.
const MODEL_URL =
  "https://storage.googleapis.com/mediapipe-models/hand_landmarker/hand_landmarker/float16/1/hand_landmarker.task";

export interface Detection {
  hand: HandPoint[] | null;
  handedness?: Handedness;
}

export class HandTracker {
  private constructor(private landmarker: HandLandmarker) {}

  static async create(modelUrl?: string): Promise<HandTracker> {
    const fileset = await FilesetResolver.forVisionTasks(WASM_BASE);
    const landmarker = await HandLandmarker.createFromOptions(fileset, {
      baseOptions: {
        modelAssetPath: modelUrl ?? MODEL_URL,
        delegate: "GPU",
      },
      runningMode: "VIDEO",
      numHands: 1,
    });
    return new HandTracker(landmarker);
  }

  /** Detect on the current video frame. timestampMs must be monotone. */
  detect(video: HTMLVideoElement, timestampMs: number): Detection {
    const result = this.landmarker.detectForVideo(video, timestampMs);
    const first = result.landmarks[0];
    if (!first || first.length !== 21) return { hand: null };
    const hand = first.map((p): HandPoint => [p.x, p.y, p.z]);
    const category = result.handedness[0]?.[0]?.categoryName?.toLowerCase();
    const handedness =
      category === "left" || category === "right" ? category : undefined;
    return { hand, handedness };
  }

  close(): void {
    this.landmarker.close();
  }
}
