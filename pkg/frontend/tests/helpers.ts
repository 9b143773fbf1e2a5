/**
 * Test harness: a scripted fetch that serves recorded gateway traffic.
 *
 * The fixtures were captured from the real service (scripts/capture_trace.py),
 * so every number a test asserts against came out of the gateway, not out of
 * the test author's head. The script is strict: requests must arrive in the
 * recorded order, and when a step carries a recorded body the outgoing body
 * must match it exactly.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

export interface TraceStep {
  method: string;
  path: string;
  status: number;
  response: unknown;
  body?: unknown;
}

export function loadFixture<T>(name: string): T {
  const path = join(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf8")) as T;
}

/** JSON with object keys sorted, for order-insensitive body comparison. */
export function canonical(value: unknown): string {
  return JSON.stringify(sortKeys(value));
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) {
    return value.map(sortKeys);
  }
  if (value && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as Record<string, unknown>).sort()) {
      out[key] = sortKeys((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}

export interface RecordedCall {
  method: string;
  path: string;
  body?: unknown;
}

export class FetchScript {
  readonly calls: RecordedCall[] = [];
  private cursor = 0;

  constructor(private readonly steps: TraceStep[]) {}

  install(): void {
    globalThis.fetch = this.handler as typeof fetch;
  }

  get done(): boolean {
    return this.cursor === this.steps.length;
  }

  get pending(): string[] {
    return this.steps.slice(this.cursor).map((step) => `${step.method} ${step.path}`);
  }

  private handler = async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    const method = init?.method ?? "GET";
    const body =
      typeof init?.body === "string" ? (JSON.parse(init.body) as unknown) : undefined;
    this.calls.push(body === undefined ? { method, path } : { method, path, body });

    const step = this.steps[this.cursor];
    if (!step) {
      throw new Error(`unexpected request ${method} ${path}: script exhausted`);
    }
    if (step.method !== method || step.path !== path) {
      throw new Error(
        `expected ${step.method} ${step.path}, got ${method} ${path} (step ${this.cursor})`,
      );
    }
    if (step.body !== undefined && canonical(body) !== canonical(step.body)) {
      throw new Error(
        `body mismatch at ${method} ${path}:\n sent ${canonical(body)}\n recorded ${canonical(step.body)}`,
      );
    }
    this.cursor += 1;
    const payload = structuredClone(step.response);
    return {
      ok: step.status >= 200 && step.status < 300,
      status: step.status,
      json: async () => payload,
    } as Response;
  };
}

/** Minimal stand-in for DataTransfer; jsdom does not construct the real one. */
function fakeDataTransfer() {
  const data = new Map<string, string>();
  return {
    setData: (type: string, value: string) => void data.set(type, value),
    getData: (type: string) => data.get(type) ?? "",
  };
}

function fireDragEvent(node: Element, type: string, dataTransfer: unknown): void {
  const event = new Event(type, { bubbles: true, cancelable: true });
  Object.defineProperty(event, "dataTransfer", { value: dataTransfer });
  node.dispatchEvent(event);
}

/** Simulate dragging one element onto another. */
export function drag(source: Element, target: Element): void {
  const dataTransfer = fakeDataTransfer();
  fireDragEvent(source, "dragstart", dataTransfer);
  fireDragEvent(target, "dragover", dataTransfer);
  fireDragEvent(target, "drop", dataTransfer);
}

export function click(node: Element | null): void {
  if (!node) {
    throw new Error("click target not found");
  }
  (node as HTMLElement).click();
}

export function query<T extends Element = HTMLElement>(
  root: ParentNode,
  selector: string,
): T {
  const node = root.querySelector<Element>(selector);
  if (!node) {
    throw new Error(`selector not found: ${selector}`);
  }
  return node as T;
}

export function text(root: ParentNode, selector: string): string {
  return query(root, selector).textContent ?? "";
}
