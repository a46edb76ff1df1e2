// Typed client for the walker service REST API. The server is the single
// source of truth; this module only moves JSON.

export type TypeInfo =
  | { kind: 'boolean' }
  | { kind: 'enum'; values: string[] }
  | { kind: 'int'; lo: number; hi: number };

export interface VariableInfo {
  name: string;
  kind: 'env' | 'sys';
  type: TypeInfo;
  internal: boolean;
}

export type Value = boolean | number | string;
export type Assignment = Record<string, Value>;

export interface SessionState {
  specName: string;
  cursor: number;
  historyLength: number;
  current: Assignment | null;
}

export interface ViolatedAssumption {
  label: string;
  kind: string;
  file: string;
  start: number;
  end: number;
}

export interface EnvOptions {
  options: Assignment[];
  truncated: boolean;
}

export type StepResult =
  | { kind: 'ok'; outputs: Assignment; state: SessionState }
  | { kind: 'violation'; violated: ViolatedAssumption[] }
  | { kind: 'error'; message: string };

export type CreateSessionRequest =
  | { specPath: string }
  | { controllerPath: string }
  | { controllerB64: string; name?: string };

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asError(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body.error) message = body.error;
    if (body.diagnostics) message += '\n' + body.diagnostics.join('\n');
  } catch {
    // not JSON: keep the status line
  }
  return new ApiError(response.status, message);
}

export class WalkerClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(
    request: CreateSessionRequest,
  ): Promise<{ id: string; variables: VariableInfo[] }> {
    const response = await fetch(this.url('/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw await asError(response);
    return response.json();
  }

  /** Variables of a session that already exists on the server (used to
   * resume the session `spectra walk` pre-creates). */
  async variables(
    id: string,
  ): Promise<{ id: string; variables: VariableInfo[] }> {
    const response = await fetch(this.url(`/sessions/${id}/variables`));
    if (!response.ok) throw await asError(response);
    return response.json();
  }

  async state(id: string): Promise<SessionState> {
    const response = await fetch(this.url(`/sessions/${id}/state`));
    if (!response.ok) throw await asError(response);
    return response.json();
  }

  async envOptions(id: string): Promise<EnvOptions> {
    const response = await fetch(this.url(`/sessions/${id}/env-options`));
    if (!response.ok) throw await asError(response);
    return response.json();
  }

  async step(id: string, inputs: Assignment): Promise<StepResult> {
    const response = await fetch(this.url(`/sessions/${id}/step`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ inputs }),
    });
    if (response.status === 409) {
      const body = await response.json();
      return { kind: 'violation', violated: body.violatedAssumptions };
    }
    if (!response.ok) {
      const err = await asError(response);
      return { kind: 'error', message: err.message };
    }
    const body = await response.json();
    return { kind: 'ok', outputs: body.outputs, state: body.state };
  }

  async back(id: string): Promise<SessionState> {
    const response = await fetch(this.url(`/sessions/${id}/back`), {
      method: 'POST',
    });
    if (!response.ok) throw await asError(response);
    return response.json();
  }

  async remove(id: string): Promise<void> {
    await fetch(this.url(`/sessions/${id}`), { method: 'DELETE' });
  }

  traceUrl(id: string): string {
    return this.url(`/sessions/${id}/trace.csv`);
  }
}
