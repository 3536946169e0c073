/** Reconnect backoff: exponential doubling with a cap and optional jitter.
 *
 * Jitter comes from an injected rng so the schedule is deterministic under
 * test. reset() is called on every successful connect, so one good
 * connection forgets a long outage.
 */

export interface BackoffConfig {
  baseMs: number;
  capMs: number;
  /** Uniform [0,1) source; scaled to +/- 10% of the delay. */
  rng?: () => number;
}

export class Backoff {
  private attempt = 0;
  private readonly baseMs: number;
  private readonly capMs: number;
  private readonly rng: () => number;

  constructor(cfg: BackoffConfig) {
    if (cfg.baseMs <= 0 || cfg.capMs < cfg.baseMs) {
      throw new Error(`bad backoff config: base ${cfg.baseMs}, cap ${cfg.capMs}`);
    }
    this.baseMs = cfg.baseMs;
    this.capMs = cfg.capMs;
    this.rng = cfg.rng ?? Math.random;
  }

  /** Delay before the next attempt, advancing the schedule. */
  nextDelayMs(): number {
    const raw = Math.min(this.baseMs * 2 ** this.attempt, this.capMs);
    this.attempt += 1;
    const jitter = (this.rng() * 2 - 1) * 0.1 * raw;
    return Math.round(raw + jitter);
  }

  get attempts(): number {
    return this.attempt;
  }

  reset(): void {
    this.attempt = 0;
  }
}
