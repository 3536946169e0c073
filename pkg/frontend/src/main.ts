/** Page wiring: settings panel, camera, tracker, socket, render loop.
 *
 * Capture and render are independent loops. Capture follows the camera's
 * frame callbacks, detects landmarks, and fires a frame line at the server
 * for every camera frame (hand or not). Render follows requestAnimationFrame
 * and draws whatever snapshot arrived last.
 */
import { GameSocket } from "./net.js";
import { encodeFrame, type HandPoint } from "./protocol.js";
import { drawFrame } from "./renderer.js";
import {
  DEFAULT_SETTINGS,
  normalizeServerUrl,
  settingsFromJson,
  settingsToJson,
  type UiSettings,
} from "./settings.js";
import { TraceCollector, traceFilename } from "./trace.js";
import { HandTracker } from "./tracker.js";

const STORAGE_KEY = "tiltlane-settings";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("game");
const video = el<HTMLVideoElement>("camera");
const urlInput = el<HTMLInputElement>("server-url");
const overlayInput = el<HTMLInputElement>("show-overlay");
const cameraSelect = el<HTMLSelectElement>("camera-select");
const connectButton = el<HTMLButtonElement>("connect");
const downloadButton = el<HTMLButtonElement>("download-trace");
const statusLine = el<HTMLElement>("status");
const cameraHelp = el<HTMLElement>("camera-help");

const ctx = canvas.getContext("2d");
if (ctx === null) throw new Error("2d canvas not supported");

let settings: UiSettings = settingsFromJson(localStorage.getItem(STORAGE_KEY));
let socket: GameSocket | null = null;
let tracker: HandTracker | null = null;
let collector = new TraceCollector();
let lastHand: HandPoint[] | null = null;
let lastSentMs = -1;
let framesSent = 0;
let fpsWindowStart = performance.now();
let fpsWindowCount = 0;
let fps = 0;
let connState = "idle";

function status(text: string): void {
  statusLine.textContent = text;
}

function refreshStatus(): void {
  status(`${connState} | ${fps.toFixed(0)} fps | ${framesSent} frames sent`);
}

function loadPanel(): void {
  urlInput.value = settings.serverUrl;
  overlayInput.checked = settings.showLandmarkOverlay;
}

async function populateCameras(): Promise<void> {
  const devices = await navigator.mediaDevices.enumerateDevices();
  cameraSelect.replaceChildren();
  const auto = document.createElement("option");
  auto.value = "";
  auto.textContent = "default camera";
  cameraSelect.append(auto);
  for (const d of devices) {
    if (d.kind !== "videoinput") continue;
    const opt = document.createElement("option");
    opt.value = d.deviceId;
    opt.textContent = d.label || `camera ${cameraSelect.length}`;
    cameraSelect.append(opt);
  }
  if (settings.cameraDeviceId) cameraSelect.value = settings.cameraDeviceId;
}

function readPanel(): UiSettings | null {
  const url = normalizeServerUrl(urlInput.value);
  if (url === null) {
    status(`bad server url: ${urlInput.value}`);
    return null;
  }
  const next: UiSettings = {
    serverUrl: url,
    showLandmarkOverlay: overlayInput.checked,
  };
  if (cameraSelect.value !== "") next.cameraDeviceId = cameraSelect.value;
  return next;
}

async function openCamera(): Promise<boolean> {
  const constraints: MediaStreamConstraints = {
    video: settings.cameraDeviceId
      ? { deviceId: { exact: settings.cameraDeviceId } }
      : { width: 640, height: 480 },
    audio: false,
  };
  try {
    const stream = await navigator.mediaDevices.getUserMedia(constraints);
    video.srcObject = stream;
    await video.play();
    cameraHelp.hidden = true;
    return true;
  } catch {
    cameraHelp.hidden = false;
    status("camera denied");
    return false;
  }
}

function captureLoop(): void {
  const step = () => {
    if (tracker !== null && video.readyState >= 2) {
      // mediapipe needs strictly increasing timestamps; a display faster
      // than the camera can hand us the same frame time twice
      const t = Math.round(performance.now());
      if (t > lastSentMs) {
        lastSentMs = t;
        const detection = tracker.detect(video, t);
        lastHand = detection.hand;
        const line = encodeFrame(t, detection.hand, detection.handedness);
        if (line !== null && socket !== null && socket.sendFrameLine(line)) {
          collector.addFrameLine(line);
          framesSent += 1;
          fpsWindowCount += 1;
        }
      }
    }
    const now = performance.now();
    if (now - fpsWindowStart >= 1000) {
      fps = (fpsWindowCount * 1000) / (now - fpsWindowStart);
      fpsWindowStart = now;
      fpsWindowCount = 0;
      refreshStatus();
    }
    if ("requestVideoFrameCallback" in video) {
      video.requestVideoFrameCallback(step);
    } else {
      requestAnimationFrame(step);
    }
  };
  step();
}

function renderLoop(): void {
  const overlay = settings.showLandmarkOverlay ? lastHand : null;
  drawFrame(ctx!, socket?.latestSnapshot ?? null, overlay);
  requestAnimationFrame(renderLoop);
}

async function connectAndPlay(): Promise<void> {
  const next = readPanel();
  if (next === null) return;
  settings = next;
  localStorage.setItem(STORAGE_KEY, settingsToJson(settings));

  connectButton.disabled = true;
  try {
    if (!(await openCamera())) return;
    if (tracker === null) {
      status("loading hand model");
      const modelOverride =
        new URLSearchParams(location.search).get("model") ?? undefined;
      tracker = await HandTracker.create(modelOverride);
    }
    socket?.stop();
    collector = new TraceCollector();
    framesSent = 0;
    socket = new GameSocket(settings.serverUrl, {
      onState: (state, detail) => {
        connState = `${state} (${detail})`;
        refreshStatus();
      },
    });
    socket.start();
    downloadButton.disabled = false;
  } finally {
    connectButton.disabled = false;
  }
}

function downloadTrace(): void {
  const blob = new Blob([collector.fileContents()], {
    type: "application/jsonl",
  });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = traceFilename();
  a.click();
  URL.revokeObjectURL(a.href);
}

loadPanel();
populateCameras().catch(() => {
  // enumeration before permission often yields blank labels; harmless
});
connectButton.addEventListener("click", () => void connectAndPlay());
downloadButton.addEventListener("click", downloadTrace);
overlayInput.addEventListener("change", () => {
  settings.showLandmarkOverlay = overlayInput.checked;
  localStorage.setItem(STORAGE_KEY, settingsToJson(settings));
});
status(`idle | server ${settings.serverUrl || DEFAULT_SETTINGS.serverUrl}`);
captureLoop();
renderLoop();
