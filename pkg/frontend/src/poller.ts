/** Per-job status polling with retry backoff.
 *
 * At most one request is in flight per job; terminal jobs are dropped from
 * the tracking set. On failure the interval backs off exponentially (up to
 * a cap) and a stale-data banner event is emitted; the first success resets
 * the interval and clears the banner.
 */

import { ApiClient } from "./api.js";
import type { AppEvent } from "./state.js";
import { isTerminal } from "./state.js";

export class JobPoller {
  private tracked = new Set<string>();
  private inFlight = new Set<string>();
  private delayMs: number;

  constructor(
    private readonly api: ApiClient,
    private readonly onEvent: (event: AppEvent) => void,
    readonly baseDelayMs: number = 1000,
    readonly maxDelayMs: number = 30000,
  ) {
    this.delayMs = baseDelayMs;
  }

  track(jobId: string): void {
    this.tracked.add(jobId);
  }

  trackedIds(): string[] {
    return [...this.tracked];
  }

  /** Delay until the next poll round, reflecting the current backoff. */
  currentDelayMs(): number {
    return this.delayMs;
  }

  /** One polling round over every tracked, non-in-flight job. */
  async pollOnce(): Promise<void> {
    const ids = [...this.tracked].filter((id) => !this.inFlight.has(id));
    let failed = false;
    await Promise.all(
      ids.map(async (id) => {
        this.inFlight.add(id);
        try {
          const job = await this.api.getJob(id);
          this.onEvent({ type: "job-updated", job });
          if (isTerminal(job.status)) this.tracked.delete(id);
        } catch (err) {
          failed = true;
          this.onEvent({
            type: "poll-failed",
            message: `status refresh failed: ${
              err instanceof Error ? err.message : String(err)
            }`,
          });
        } finally {
          this.inFlight.delete(id);
        }
      }),
    );
    this.delayMs = failed
      ? Math.min(this.delayMs * 2, this.maxDelayMs)
      : this.baseDelayMs;
  }

  /** Poll on a timer until no non-terminal jobs remain. */
  async run(sleep: (ms: number) => Promise<void>): Promise<void> {
    while (this.tracked.size > 0) {
      await this.pollOnce();
      if (this.tracked.size === 0) break;
      await sleep(this.delayMs);
    }
  }
}
