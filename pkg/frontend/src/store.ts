/** Revision-guarded view state.
 *
 * Concurrent polls can resolve out of order; every payload is stamped with
 * the store revision it came from, and a stale revision never overwrites a
 * newer one (last-writer-wins by revision, not by arrival).
 */

export class RevisionGuard<T> {
  private revision = -1;
  private value: T | null = null;

  /** Accept the payload only if it is at least as new as what we show. */
  offer(revision: number, value: T): boolean {
    if (revision < this.revision) return false;
    this.revision = revision;
    this.value = value;
    return true;
  }

  get(): T | null {
    return this.value;
  }

  currentRevision(): number {
    return this.revision;
  }
}

/** Incremental fault timeline: grows via the `since` cursor, deduplicated
 * by sequence number, rendered oldest first. */
export class FaultTimeline {
  private events = new Map<number, unknown>();
  cursor = -1;

  absorb(cursor: number, events: { seq: number }[]): number {
    let added = 0;
    for (const event of events) {
      if (!this.events.has(event.seq)) {
        this.events.set(event.seq, event);
        added += 1;
      }
    }
    this.cursor = Math.max(this.cursor, cursor);
    return added;
  }

  reset(): void {
    this.events.clear();
    this.cursor = -1;
  }

  all<T>(): T[] {
    return [...this.events.entries()].sort((a, b) => a[0] - b[0]).map(([, e]) => e as T);
  }

  get size(): number {
    return this.events.size;
  }
}

/** One in-flight optimistic edit: shown immediately, rolled back on failure. */
export interface OptimisticEdit<T> {
  apply: (current: T) => T;
  rollback: (current: T) => T;
}

export class OptimisticValue<T> {
  private confirmed: T;
  private pending: OptimisticEdit<T>[] = [];

  constructor(initial: T) {
    this.confirmed = initial;
  }

  view(): T {
    return this.pending.reduce((value, edit) => edit.apply(value), this.confirmed);
  }

  begin(edit: OptimisticEdit<T>): void {
    this.pending.push(edit);
  }

  commit(edit: OptimisticEdit<T>, confirmedValue?: T): void {
    this.pending = this.pending.filter((e) => e !== edit);
    this.confirmed = confirmedValue !== undefined ? confirmedValue : edit.apply(this.confirmed);
  }

  abort(edit: OptimisticEdit<T>): void {
    this.pending = this.pending.filter((e) => e !== edit);
  }

  settle(confirmedValue: T): void {
    this.confirmed = confirmedValue;
  }
}
