// Bootstrap: the loader form creates a session (spec path, controller
// path, or uploaded .spcc file) and hands it to the session view. One
// request is in flight per session at a time; buttons stay disabled
// while pending.

import { CreateSessionRequest, WalkerClient } from './api.js';
import { SessionModel } from './model.js';
import { SessionView } from './view.js';

export class App {
  readonly root: HTMLElement;
  readonly client: WalkerClient;
  model: SessionModel | null = null;
  view: SessionView | null = null;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(root: HTMLElement, baseUrl = '') {
    this.root = root;
    this.client = new WalkerClient(baseUrl);
    this.renderLoader();
  }

  /** Serialize user actions: one in-flight request per session. */
  private enqueue(action: () => Promise<void>): Promise<void> {
    const next = this.queue.then(action, action).then(() => this.render());
    this.queue = next.catch(() => undefined);
    return next;
  }

  whenIdle(): Promise<unknown> {
    return this.queue;
  }

  async open(request: CreateSessionRequest): Promise<void> {
    this.adopt(await SessionModel.create(this.client, request));
  }

  /** Resume a session created by `spectra walk` (?session=... URL). */
  async attach(sessionId: string): Promise<void> {
    this.adopt(await SessionModel.attach(this.client, sessionId));
  }

  private adopt(model: SessionModel): void {
    if (this.model) void this.model.dispose();
    this.model = model;
    this.view = new SessionView(model, {
      step: (inputs) => void this.enqueue(async () => {
        await model.step(inputs);
      }),
      back: () => void this.enqueue(async () => {
        await model.back();
      }),
      gotoIndex: (index) => void this.enqueue(async () => {
        await model.gotoIndex(index);
      }),
    });
    this.render();
  }

  render(): void {
    if (this.model && this.view) {
      this.view.render();
      this.root.replaceChildren(this.loaderBar(), this.view.root);
    } else {
      this.renderLoader();
    }
  }

  private loaderBar(): HTMLElement {
    const bar = document.createElement('div');
    bar.className = 'loader-bar';
    const change = document.createElement('button');
    change.textContent = 'Load another spec/controller';
    change.type = 'button';
    change.addEventListener('click', () => {
      this.model = null;
      this.view = null;
      this.renderLoader();
    });
    bar.append(change);
    return bar;
  }

  private renderLoader(): void {
    const form = document.createElement('form');
    form.className = 'loader';
    form.addEventListener('submit', (event) => event.preventDefault());
    form.innerHTML = `
      <h2>Controller Walker</h2>
      <p>Load a specification (synthesized on the server) or a saved
         controller file.</p>
      <label class="field"><span>Server path (.spectra or .spcc)</span>
        <input name="path" placeholder="specs/forklift.spectra"></label>
      <label class="field"><span>or upload a controller (.spcc)</span>
        <input name="upload" type="file" accept=".spcc"></label>
      <button type="submit" class="load">Load</button>
      <div class="banner error" hidden></div>
    `;
    const errorBox = form.querySelector('.banner') as HTMLElement;
    form.querySelector('.load')!.addEventListener('click', () => {
      void this.enqueue(async () => {
        errorBox.hidden = true;
        try {
          const path =
            (form.querySelector('[name=path]') as HTMLInputElement).value;
          const file =
            (form.querySelector('[name=upload]') as HTMLInputElement)
              .files?.[0];
          if (file) {
            const bytes = new Uint8Array(await file.arrayBuffer());
            let binary = '';
            bytes.forEach((b) => (binary += String.fromCharCode(b)));
            await this.open({ controllerB64: btoa(binary), name: file.name });
          } else if (path.endsWith('.spcc')) {
            await this.open({ controllerPath: path });
          } else if (path) {
            await this.open({ specPath: path });
          } else {
            throw new Error('enter a path or choose a file');
          }
        } catch (error) {
          errorBox.textContent = String(
            error instanceof Error ? error.message : error);
          errorBox.hidden = false;
        }
      });
    });
    this.root.replaceChildren(form);
  }
}

export function mountApp(root: HTMLElement, baseUrl = ''): App {
  const app = new App(root, baseUrl);
  const params = new URLSearchParams(window.location.search);
  const session = params.get('session');
  if (session) {
    void app.whenIdle().then(() => app.attach(session));
  }
  return app;
}

const container = typeof document !== 'undefined'
  ? document.getElementById('app')
  : null;
if (container) {
  mountApp(container);
}
