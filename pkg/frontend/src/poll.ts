/** Fixed-interval poller with overlap protection: a slow response never
 * stacks a second request behind itself. */

export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly task: () => Promise<void>,
    public readonly intervalMs: number,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      await this.task();
    } catch {
      // polling survives transient errors; the next tick retries
    } finally {
      this.inFlight = false;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }
}
