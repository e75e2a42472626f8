// Trailing debounce with a hard rate limit: at most one call per minIntervalMs,
// and the last value in a burst always gets delivered.

export interface RateLimited<A> {
  (value: A): void;
  flush(): void;
  cancel(): void;
}

export function rateLimitedTrailing<A>(
  fn: (value: A) => void,
  minIntervalMs: number,
  now: () => number = () => Date.now(),
  schedule: (cb: () => void, ms: number) => ReturnType<typeof setTimeout> = setTimeout,
  unschedule: (t: ReturnType<typeof setTimeout>) => void = clearTimeout,
): RateLimited<A> {
  let timer: ReturnType<typeof setTimeout> | undefined;
  let lastFire = -Infinity;
  let pending: { value: A } | undefined;

  const fire = () => {
    timer = undefined;
    if (!pending) return;
    const { value } = pending;
    pending = undefined;
    lastFire = now();
    fn(value);
  };

  const call = (value: A) => {
    pending = { value };
    if (timer !== undefined) return; // a delivery is already scheduled
    const wait = Math.max(0, minIntervalMs - (now() - lastFire));
    timer = schedule(fire, wait);
  };
  call.flush = () => {
    if (timer !== undefined) {
      unschedule(timer);
      fire();
    }
  };
  call.cancel = () => {
    if (timer !== undefined) unschedule(timer);
    timer = undefined;
    pending = undefined;
  };
  return call;
}
