/** Session recording for the "download trace" button.
 *
 * Collects exactly the frame lines this client sent, in send order, and
 * renders them as a trace file: a header line identifying the producer,
 * then one frame per line. The server's replay tool accepts the result
 * directly (the game config travels separately on replay).
 */

export class TraceCollector {
  private frames: string[] = [];

  addFrameLine(line: string): void {
    this.frames.push(line);
  }

  get frameCount(): number {
    return this.frames.length;
  }

  clear(): void {
    this.frames = [];
  }

  /** Whole-file contents, newline-terminated. `now` is injectable for
   * deterministic tests. */
  fileContents(now: () => Date = () => new Date()): string {
    const header = {
      header: {
        created: now().toISOString().slice(0, 19) + "+00:00",
        client: "tiltlane-web/0.1.0",
      },
    };
    const lines = [JSON.stringify(header), ...this.frames];
    return lines.join("\n") + "\n";
  }
}

export function traceFilename(now: () => Date = () => new Date()): string {
  const stamp = now().toISOString().replace(/[:.]/g, "-").slice(0, 19);
  return `tiltlane-${stamp}.jsonl`;
}
