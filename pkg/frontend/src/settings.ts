/** User-facing settings and their persistence shape.
 *
 * The settings panel edits these three fields; they round-trip through
 * localStorage as JSON. Unknown stored keys are ignored so an old page
 * version never breaks on a newer blob.
 */

export interface UiSettings {
  serverUrl: string;
  showLandmarkOverlay: boolean;
  cameraDeviceId?: string;
}

export const DEFAULT_SETTINGS: UiSettings = {
  serverUrl: "ws://127.0.0.1:8765",
  showLandmarkOverlay: false,
};

/** Accept what a person types for "where is the server" and return a
 * well-formed ws:// or wss:// URL, or null if it cannot be one.
 * Bare host:port gets ws:// prefixed; http(s) and other schemes are
 * rejected rather than silently rewritten. */
export function normalizeServerUrl(input: string): string | null {
  const text = input.trim();
  if (text === "") return null;
  const withScheme = /^[a-zA-Z][a-zA-Z0-9+.-]*:\/\//.test(text)
    ? text
    : `ws://${text}`;
  let url: URL;
  try {
    url = new URL(withScheme);
  } catch {
    return null;
  }
  if (url.protocol !== "ws:" && url.protocol !== "wss:") return null;
  if (url.hostname === "") return null;
  return url.toString();
}

export function settingsToJson(s: UiSettings): string {
  return JSON.stringify(s);
}

export function settingsFromJson(text: string | null): UiSettings {
  if (text === null) return { ...DEFAULT_SETTINGS };
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return { ...DEFAULT_SETTINGS };
  }
  if (typeof obj !== "object" || obj === null) return { ...DEFAULT_SETTINGS };
  const o = obj as Record<string, unknown>;
  const out: UiSettings = { ...DEFAULT_SETTINGS };
  if (typeof o.serverUrl === "string" && normalizeServerUrl(o.serverUrl) !== null) {
    out.serverUrl = o.serverUrl;
  }
  if (typeof o.showLandmarkOverlay === "boolean") {
    out.showLandmarkOverlay = o.showLandmarkOverlay;
  }
  if (typeof o.cameraDeviceId === "string" && o.cameraDeviceId !== "") {
    out.cameraDeviceId = o.cameraDeviceId;
  }
  return out;
}
