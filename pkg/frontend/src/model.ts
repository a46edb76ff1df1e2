// Session model mirroring the server: variables, the visited timeline,
// the cursor, and the last violation. It never computes semantics
// locally; every transition goes through an endpoint and the mirror is
// refreshed from the response.

import {
  Assignment,
  EnvOptions,
  SessionState,
  StepResult,
  VariableInfo,
  ViolatedAssumption,
  WalkerClient,
} from './api.js';

export interface TimelineEntry {
  // decoded state if this position was visited in this browser session
  state: Assignment | null;
  // the inputs that produced this entry (undefined for the initial state)
  inputs?: Assignment;
}

export class SessionModel {
  readonly timeline: TimelineEntry[] = [];
  cursor = -1;
  specName = '';
  options: EnvOptions = { options: [], truncated: false };
  violation: ViolatedAssumption[] | null = null;
  lastError: string | null = null;
  pending = false;
  changed: Set<string> = new Set();

  private constructor(
    readonly client: WalkerClient,
    readonly id: string,
    readonly variables: VariableInfo[],
  ) {}

  static async create(
    client: WalkerClient,
    request: Parameters<WalkerClient['createSession']>[0],
  ): Promise<SessionModel> {
    const created = await client.createSession(request);
    const model = new SessionModel(client, created.id, created.variables);
    await model.refresh();
    return model;
  }

  /** Resume a session that already exists on the server. */
  static async attach(
    client: WalkerClient,
    id: string,
  ): Promise<SessionModel> {
    const info = await client.variables(id);
    const model = new SessionModel(client, id, info.variables);
    await model.refresh();
    return model;
  }

  get envVariables(): VariableInfo[] {
    return this.variables.filter((v) => v.kind === 'env');
  }

  get sysVariables(): VariableInfo[] {
    return this.variables.filter((v) => v.kind === 'sys');
  }

  get current(): Assignment | null {
    return this.cursor >= 0 ? this.timeline[this.cursor]?.state ?? null : null;
  }

  get historyLength(): number {
    return this.timeline.length;
  }

  get canBack(): boolean {
    return this.cursor > 0 && !this.pending;
  }

  get traceUrl(): string {
    return this.client.traceUrl(this.id);
  }

  private syncState(state: SessionState): void {
    this.specName = state.specName;
    // the server owns the truth: match its history length exactly
    this.timeline.length = state.historyLength;
    for (let i = 0; i < this.timeline.length; i++) {
      if (!this.timeline[i]) this.timeline[i] = { state: null };
    }
    this.cursor = state.cursor;
    if (state.current && this.cursor >= 0) {
      this.timeline[this.cursor].state = state.current;
    }
    this.updateChanged();
  }

  private updateChanged(): void {
    this.changed.clear();
    if (this.cursor <= 0) return;
    const now = this.timeline[this.cursor]?.state;
    const before = this.timeline[this.cursor - 1]?.state;
    if (!now || !before) return;
    for (const name of Object.keys(now)) {
      if (before[name] !== now[name]) this.changed.add(name);
    }
  }

  async refresh(): Promise<void> {
    const state = await this.client.state(this.id);
    this.syncState(state);
    this.options = await this.client.envOptions(this.id);
  }

  /** One step with the given environment inputs; a 409 becomes the
   * violation banner and leaves the history untouched. */
  async step(inputs: Assignment): Promise<StepResult> {
    this.pending = true;
    this.violation = null;
    this.lastError = null;
    try {
      const result = await this.client.step(this.id, inputs);
      if (result.kind === 'ok') {
        this.syncState(result.state);
        if (this.cursor >= 0) this.timeline[this.cursor].inputs = inputs;
        this.options = await this.client.envOptions(this.id);
      } else if (result.kind === 'violation') {
        this.violation = result.violated;
      } else {
        this.lastError = result.message;
      }
      return result;
    } finally {
      this.pending = false;
    }
  }

  async back(): Promise<void> {
    this.pending = true;
    this.violation = null;
    this.lastError = null;
    try {
      const state = await this.client.back(this.id);
      this.syncState(state);
      this.options = await this.client.envOptions(this.id);
    } finally {
      this.pending = false;
    }
  }

  /** Timeline click: move the cursor to `index` using back steps or
   * recorded-input redo steps, all through the server. */
  async gotoIndex(index: number): Promise<void> {
    if (index < 0 || index >= this.timeline.length) return;
    while (this.cursor > index) {
      await this.back();
    }
    while (this.cursor < index) {
      const next = this.timeline[this.cursor + 1];
      if (!next?.inputs) break; // nothing recorded to replay
      const result = await this.step(next.inputs);
      if (result.kind !== 'ok') break;
    }
  }

  async dispose(): Promise<void> {
    await this.client.remove(this.id);
  }
}
