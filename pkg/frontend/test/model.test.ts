// Model unit tests against a scripted fake server: the model must mirror
// server state exactly and never compute semantics on its own.

import { describe, expect, it } from 'vitest';

import type {
  Assignment,
  EnvOptions,
  SessionState,
  StepResult,
  VariableInfo,
} from '../src/api.js';
import { SessionModel } from '../src/model.js';

const VARIABLES: VariableInfo[] = [
  { name: 'x', kind: 'env', type: { kind: 'boolean' }, internal: false },
  { name: 'y', kind: 'sys', type: { kind: 'boolean' }, internal: false },
];

/** Minimal in-memory stand-in for the walker service: y mirrors x, and
 * stepping to x=true from x=false violates "keepLow" when constrained. */
class FakeServer {
  history: Assignment[] = [];
  cursor = -1;
  constrained: boolean;

  constructor(constrained = false) {
    this.constrained = constrained;
  }

  private stateJson(): SessionState {
    return {
      specName: 'fake.spectra',
      cursor: this.cursor,
      historyLength: this.history.length,
      current: this.cursor >= 0 ? this.history[this.cursor] : null,
    };
  }

  async createSession() {
    return { id: 'fake', variables: VARIABLES };
  }

  async variables() {
    return { id: 'fake', variables: VARIABLES };
  }

  async state(): Promise<SessionState> {
    return this.stateJson();
  }

  async envOptions(): Promise<EnvOptions> {
    const atLow = this.cursor >= 0 && this.history[this.cursor].x === false;
    const options: Assignment[] =
      this.constrained && atLow ? [{ x: false }] : [{ x: false }, { x: true }];
    return { options, truncated: false };
  }

  async step(_id: string, inputs: Assignment): Promise<StepResult> {
    const x = inputs.x === true;
    if (this.constrained && this.cursor >= 0
        && this.history[this.cursor].x === false && x) {
      return {
        kind: 'violation',
        violated: [{ label: 'keepLow', kind: 'trans', file: 'fake', start: 0,
                     end: 0 }],
      };
    }
    // redo along retained future
    const next = this.history[this.cursor + 1];
    if (next && next.x === x) {
      this.cursor += 1;
    } else {
      this.history.length = this.cursor + 1;
      this.history.push({ x, y: x });
      this.cursor += 1;
    }
    return {
      kind: 'ok',
      outputs: { y: x },
      state: this.stateJson(),
    };
  }

  async back(): Promise<SessionState> {
    if (this.cursor <= 0) throw new Error('already at the initial state');
    this.cursor -= 1;
    return this.stateJson();
  }

  async remove() {}

  traceUrl(id: string) {
    return `/sessions/${id}/trace.csv`;
  }
}

async function makeModel(constrained = false) {
  const server = new FakeServer(constrained);
  const model = await SessionModel.create(server as any, { specPath: 'x' });
  return { server, model };
}

describe('SessionModel', () => {
  it('mirrors server history length and cursor', async () => {
    const { model } = await makeModel();
    expect(model.historyLength).toBe(0);
    await model.step({ x: true });
    await model.step({ x: false });
    expect(model.historyLength).toBe(2);
    expect(model.cursor).toBe(1);
    expect(model.current).toEqual({ x: false, y: false });
  });

  it('keeps the timeline equal to the server after back and redo', async () => {
    const { model } = await makeModel();
    await model.step({ x: true });
    await model.step({ x: true });
    await model.step({ x: false });
    await model.back();
    await model.back();
    expect(model.cursor).toBe(0);
    expect(model.historyLength).toBe(3);
    // redo through goto
    await model.gotoIndex(2);
    expect(model.cursor).toBe(2);
    expect(model.historyLength).toBe(3);
  });

  it('divergent step truncates the mirrored future', async () => {
    const { model } = await makeModel();
    await model.step({ x: true });
    await model.step({ x: true });
    await model.back();
    await model.step({ x: false });
    expect(model.historyLength).toBe(2);
    expect(model.current).toEqual({ x: false, y: false });
  });

  it('stores violations without touching the history', async () => {
    const { model } = await makeModel(true);
    await model.step({ x: false });
    const before = model.historyLength;
    const result = await model.step({ x: true });
    expect(result.kind).toBe('violation');
    expect(model.violation?.[0].label).toBe('keepLow');
    expect(model.historyLength).toBe(before);
    // a later good step clears the banner
    await model.step({ x: false });
    expect(model.violation).toBeNull();
  });

  it('choice enabling derives only from env-options and cursor', async () => {
    const { model } = await makeModel(true);
    expect(model.canBack).toBe(false);
    await model.step({ x: false });
    expect(model.canBack).toBe(false); // cursor 0
    expect(model.options.options).toEqual([{ x: false }]);
    await model.step({ x: false });
    expect(model.canBack).toBe(true);
  });

  it('marks variables changed since the previous step', async () => {
    const { model } = await makeModel();
    await model.step({ x: true });
    expect(model.changed.size).toBe(0); // no predecessor yet
    await model.step({ x: false });
    expect(model.changed).toEqual(new Set(['x', 'y']));
    await model.step({ x: false });
    expect(model.changed.size).toBe(0);
  });
});
