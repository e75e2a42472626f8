// Monotone response gate: every request takes a ticket; a response is applied
// only if no newer ticket has been issued for the same channel, so stale
// responses can never overwrite fresher state.

export class ResponseGate {
  private issued = new Map<string, number>();
  private applied = new Map<string, number>();

  ticket(channel: string): number {
    const next = (this.issued.get(channel) ?? 0) + 1;
    this.issued.set(channel, next);
    return next;
  }

  current(channel: string): number {
    return this.issued.get(channel) ?? 0;
  }

  /** True when the holder of `ticket` may apply its response. */
  admit(channel: string, ticket: number): boolean {
    if (ticket !== this.issued.get(channel)) return false;
    if (ticket <= (this.applied.get(channel) ?? 0)) return false;
    this.applied.set(channel, ticket);
    return true;
  }

  lastApplied(channel: string): number {
    return this.applied.get(channel) ?? 0;
  }
}

/** Wrap an async producer so only the latest in-flight call lands. */
export function latestOnly<A, R>(
  gate: ResponseGate,
  channel: string,
  produce: (value: A) => Promise<R>,
  apply: (result: R) => void,
  onError: (err: unknown) => void = () => undefined,
): (value: A) => Promise<void> {
  return async (value: A) => {
    const ticket = gate.ticket(channel);
    try {
      const result = await produce(value);
      if (gate.admit(channel, ticket)) apply(result);
    } catch (err) {
      if (ticket === gate.current(channel)) onError(err); // stale failures are moot
    }
  };
}
