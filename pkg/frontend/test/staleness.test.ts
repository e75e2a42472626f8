import { describe, expect, it } from 'vitest';
import { ResponseGate, latestOnly } from '../src/staleness.js';

describe('ResponseGate', () => {
  it('admits only the newest ticket', () => {
    const gate = new ResponseGate();
    const t1 = gate.ticket('ranking');
    const t2 = gate.ticket('ranking');
    expect(gate.admit('ranking', t1)).toBe(false); // superseded before landing
    expect(gate.admit('ranking', t2)).toBe(true);
  });

  it('never lets an older response overwrite a newer one', () => {
    const gate = new ResponseGate();
    const t1 = gate.ticket('r');
    const t2 = gate.ticket('r');
    expect(gate.admit('r', t2)).toBe(true);
    expect(gate.admit('r', t1)).toBe(false);
    expect(gate.lastApplied('r')).toBe(t2);
  });

  it('channels are independent', () => {
    const gate = new ResponseGate();
    const r = gate.ticket('ranking');
    const o = gate.ticket('overlay');
    expect(gate.admit('overlay', o)).toBe(true);
    expect(gate.admit('ranking', r)).toBe(true);
  });
});

describe('latestOnly', () => {
  it('applies only the latest result when responses arrive out of order', async () => {
    const gate = new ResponseGate();
    const applied: string[] = [];
    const resolvers: Record<string, (v: string) => void> = {};
    const produce = (key: string) =>
      new Promise<string>((resolve) => {
        resolvers[key] = resolve;
      });
    const run = latestOnly(gate, 'ranking', produce, (r) => applied.push(r));

    const first = run('slow');
    const second = run('fast');
    resolvers['fast']('fast-result');
    await second;
    resolvers['slow']('slow-result'); // arrives after, must be discarded
    await first;

    expect(applied).toEqual(['fast-result']);
  });

  it('reports errors only for the newest request', async () => {
    const gate = new ResponseGate();
    const errors: unknown[] = [];
    const run = latestOnly(
      gate,
      'x',
      (v: string) => (v === 'bad' ? Promise.reject(new Error('boom')) : Promise.resolve(v)),
      () => undefined,
      (e) => errors.push(e),
    );
    const bad = run('bad');
    await run('good'); // newer request supersedes the failing one
    await bad;
    expect(errors).toEqual([]);
  });
});
