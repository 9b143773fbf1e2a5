/**
 * No decision math in the browser.
 *
 * The recorded responses are deliberately tampered with so that their
 * display strings contradict the underlying exact values and each other. A
 * renderer that recomputed anything would "correct" them; this one must show
 * the doctored strings verbatim, proving every figure on screen comes from
 * the gateway response and nowhere else.
 */

import { beforeEach, describe, expect, it } from "vitest";
import { buildApp } from "../src/app";
import { Gateway } from "../src/gateway";
import type {
  ClassificationResponse,
  SessionEnvelope,
  SweepResponse,
} from "../src/types";
import { click, FetchScript, loadFixture, query, text, type TraceStep } from "./helpers";

const trace = loadFixture<TraceStep[]>("replay_trace.json");

describe("tampered displays render verbatim", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "";
    root = document.createElement("div");
    document.body.appendChild(root);
  });

  it("z, weights and value functions", async () => {
    const envelope = structuredClone(trace[9].response) as SessionEnvelope;
    if (!envelope.derived.z || !envelope.derived.weights) {
      throw new Error("fixture lacks derived state");
    }
    envelope.derived.z.display = "9.99"; // exact stays 17/4
    envelope.derived.weights.normalized.g2.display = "0.41";
    const agePoints = envelope.derived.value_functions.g2.points;
    agePoints[agePoints.length - 1].value.display = "87.65";

    const script = new FetchScript([
      { method: "POST", path: "/sessions", status: 201, response: envelope },
    ]);
    script.install();
    const app = buildApp(root, new Gateway());
    click(query(root, ".new-blank"));
    await app.whenIdle();

    expect(text(root, ".z-badge")).toBe("z · 9.99");
    expect(text(root, '.weight-row[data-criterion="g2"] .weight-value')).toBe("0.41");
    const labels = [
      ...query(root, '.card-board[data-criterion="g2"]').querySelectorAll(".vf-value"),
    ].map((node) => node.textContent);
    expect(labels).toContain("87.65");
  });

  it("classification totals, counts and sweep categories", async () => {
    const classification = structuredClone(
      trace.find((s) => s.path.endsWith("/classification"))?.response,
    ) as ClassificationResponse;
    const a4 = classification.results.find((r) => r.ship === "a4");
    if (!a4) {
      throw new Error("fixture lacks ship a4");
    }
    a4.total.display = "12.34"; // contradicts the exact total on purpose
    classification.counts.C1 = 9; // contradicts the rows on purpose
    const sweep = structuredClone(
      trace.find((s) => s.path.endsWith("/sweep"))?.response,
    ) as SweepResponse;
    const cell = sweep.cells.find((c) => c.z === "17/4" && c.lambda_23 === "40");
    if (!cell) {
      throw new Error("fixture lacks the (40, 17/4) cell");
    }
    cell.categories.a6 = "C1"; // the untampered recording says C3

    const script = new FetchScript([
      {
        method: "POST",
        path: "/sessions",
        status: 201,
        response: trace[9].response,
      },
      trace[10],
      {
        method: "GET",
        path: "/sessions/s-0001/classification",
        status: 200,
        response: classification,
      },
      {
        method: "POST",
        path: "/sessions/s-0001/sweep",
        status: 200,
        body: trace[12].body,
        response: sweep,
      },
    ]);
    script.install();
    const app = buildApp(root, new Gateway());
    click(query(root, ".new-blank"));
    await app.whenIdle();
    click(query(root, ".fleet-bundled-raw"));
    await app.whenIdle();

    expect(script.done).toBe(true);
    expect(text(root, '.ship-row[data-ship="a4"] .ship-total')).toBe("12.34");
    expect(text(root, ".class-counts")).toBe("C1: 9 · C2: 7 · C3: 1");

    const select = query<HTMLSelectElement>(root, ".sweep-ship");
    select.value = "a6";
    select.dispatchEvent(new Event("change"));
    expect(
      text(root, '.sweep-cell[data-z="17/4"][data-lambda="40"]'),
    ).toBe("C1");
  });
});
