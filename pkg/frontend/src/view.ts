// DOM rendering: a loader form, the state panel (env/sys columns with
// change highlighting), the input form fed by /env-options, step/back
// controls, the timeline, the violation banner, and the trace export.

import { Assignment, TypeInfo, Value, VariableInfo } from './api.js';
import { SessionModel } from './model.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function showValue(value: Value | undefined): string {
  if (value === undefined) return '–';
  if (typeof value === 'boolean') return value ? 'true' : 'false';
  return String(value);
}

export interface ViewActions {
  step(inputs: Assignment): void;
  back(): void;
  gotoIndex(index: number): void;
}

export class SessionView {
  readonly root: HTMLElement;
  private inputs: Map<string, () => Value> = new Map();

  constructor(
    private readonly model: SessionModel,
    private readonly actions: ViewActions,
  ) {
    this.root = el('section', 'session');
  }

  render(): void {
    const model = this.model;
    this.root.replaceChildren();
    this.root.append(
      el('h2', 'session-title',
         `${model.specName} — step ${model.cursor} of ${model.historyLength - 1}`),
    );

    if (model.violation) {
      const banner = el('div', 'banner violation');
      banner.setAttribute('role', 'alert');
      const labels = model.violation.map((v) => v.label).join(', ');
      banner.append(
        el('strong', undefined, 'Assumption violated: '),
        el('span', 'violated-assumptions', labels),
      );
      this.root.append(banner);
    }
    if (model.lastError) {
      this.root.append(el('div', 'banner error', model.lastError));
    }

    this.root.append(this.statePanel());
    this.root.append(this.inputForm());
    this.root.append(this.timeline());
  }

  private statePanel(): HTMLElement {
    const model = this.model;
    const panel = el('div', 'state-panel');
    panel.append(
      this.column('Environment', model.envVariables),
      this.column('System', model.sysVariables),
    );
    return panel;
  }

  private column(title: string, variables: VariableInfo[]): HTMLElement {
    const model = this.model;
    const current = model.current;
    const column = el('div', 'state-column');
    column.append(el('h3', undefined, title));
    const table = el('table', 'state-table');
    for (const variable of variables) {
      const row = el('tr', variable.internal ? 'internal' : undefined);
      if (model.changed.has(variable.name)) row.classList.add('changed');
      row.dataset.variable = variable.name;
      row.append(el('td', 'var-name', variable.name));
      row.append(el('td', 'var-value',
                    showValue(current?.[variable.name])));
      table.append(row);
    }
    column.append(table);
    return column;
  }

  private control(variable: VariableInfo): HTMLElement {
    const ty: TypeInfo = variable.type;
    if (ty.kind === 'boolean') {
      const label = el('label', 'toggle');
      const box = el('input');
      box.type = 'checkbox';
      box.name = variable.name;
      this.inputs.set(variable.name, () => box.checked);
      label.append(box, el('span', undefined, variable.name));
      return label;
    }
    if (ty.kind === 'enum') {
      const label = el('label', 'field');
      label.append(el('span', undefined, variable.name));
      const select = el('select');
      select.name = variable.name;
      for (const value of ty.values) {
        const option = el('option', undefined, value);
        option.value = value;
        select.append(option);
      }
      this.inputs.set(variable.name, () => select.value);
      label.append(select);
      return label;
    }
    const label = el('label', 'field');
    label.append(el('span', undefined, `${variable.name} [${ty.lo}..${ty.hi}]`));
    const number = el('input');
    number.type = 'number';
    number.name = variable.name;
    number.min = String(ty.lo);
    number.max = String(ty.hi);
    number.value = String(ty.lo);
    this.inputs.set(variable.name, () => Number(number.value));
    label.append(number);
    return label;
  }

  private readInputs(): Assignment {
    const out: Assignment = {};
    for (const [name, read] of this.inputs) out[name] = read();
    return out;
  }

  private setInputs(values: Assignment): void {
    for (const variable of this.model.envVariables) {
      const value = values[variable.name];
      const control = this.root.querySelector(
        `[name="${variable.name}"]`,
      ) as HTMLInputElement | HTMLSelectElement | null;
      if (!control || value === undefined) continue;
      if (control instanceof HTMLInputElement && control.type === 'checkbox') {
        control.checked = value === true;
      } else {
        control.value = String(value);
      }
    }
  }

  private inputForm(): HTMLElement {
    const model = this.model;
    const form = el('form', 'input-form');
    form.addEventListener('submit', (event) => event.preventDefault());
    form.append(el('h3', undefined, 'Next environment input'));

    this.inputs.clear();
    const controls = el('div', 'controls');
    for (const variable of model.envVariables) {
      controls.append(this.control(variable));
    }
    form.append(controls);

    const buttons = el('div', 'buttons');
    const stepButton = el('button', 'step', 'Step');
    stepButton.type = 'submit';
    stepButton.disabled = model.pending;
    stepButton.addEventListener('click', () =>
      this.actions.step(this.readInputs()));
    const backButton = el('button', 'back', 'Back');
    backButton.type = 'button';
    backButton.disabled = !model.canBack;
    backButton.addEventListener('click', () => this.actions.back());
    const trace = el('a', 'trace', 'Export trace (CSV)');
    trace.href = model.traceUrl;
    trace.setAttribute('download', 'trace.csv');
    buttons.append(stepButton, backButton, trace);
    form.append(buttons);

    const options = el('div', 'env-options');
    const headline = model.options.truncated
      ? 'Allowed inputs (truncated):'
      : 'Allowed inputs:';
    options.append(el('h4', undefined, headline));
    const list = el('ul');
    for (const option of model.options.options) {
      const item = el('li', 'env-option');
      const pick = el('button', undefined,
                      Object.entries(option)
                            .map(([k, v]) => `${k}=${showValue(v)}`)
                            .join(', '));
      pick.type = 'button';
      pick.addEventListener('click', () => this.setInputs(option));
      item.append(pick);
      list.append(item);
    }
    options.append(list);
    form.append(options);
    return form;
  }

  private timeline(): HTMLElement {
    const model = this.model;
    const wrap = el('div', 'timeline');
    wrap.append(el('h3', undefined, 'Timeline'));
    const list = el('ol', 'timeline-list');
    model.timeline.forEach((entry, index) => {
      const item = el('li',
                      index === model.cursor ? 'current' : undefined);
      const button = el('button', undefined, this.describe(entry, index));
      button.type = 'button';
      button.disabled = model.pending;
      button.addEventListener('click', () => this.actions.gotoIndex(index));
      item.append(button);
      list.append(item);
    });
    wrap.append(list);
    return wrap;
  }

  private describe(entry: { state: Assignment | null }, index: number): string {
    if (!entry.state) return `state ${index}`;
    const interesting = this.model.variables
      .filter((v) => !v.internal)
      .slice(0, 4)
      .map((v) => `${v.name}=${showValue(entry.state?.[v.name])}`);
    return `${index}: ${interesting.join(' ')}`;
  }
}
