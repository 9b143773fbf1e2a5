/**
 * Gateway client unit tests: request shapes on the wire and error parsing.
 */

import { describe, expect, it } from "vitest";
import { Gateway, GatewayError } from "../src/gateway";
import { FetchScript, loadFixture } from "./helpers";

const closenessViolation = loadFixture<{ status: number; response: unknown }>(
  "closeness_violation.json",
);

describe("request shapes", () => {
  it("sends the documented methods, paths and bodies", async () => {
    const script = new FetchScript([
      { method: "POST", path: "/sessions", status: 201, response: {} },
      { method: "GET", path: "/sessions/s-1", status: 200, response: {} },
      { method: "PUT", path: "/sessions/s-1/tables/g2/cards", status: 200, response: {} },
      { method: "PUT", path: "/sessions/s-1/ranking", status: 200, response: {} },
      { method: "PUT", path: "/sessions/s-1/closeness", status: 200, response: {} },
      { method: "PUT", path: "/sessions/s-1/z", status: 200, response: {} },
      { method: "POST", path: "/sessions/s-1/fleet", status: 200, response: {} },
      { method: "GET", path: "/sessions/s-1/classification", status: 200, response: {} },
      { method: "POST", path: "/sessions/s-1/sweep", status: 200, response: {} },
    ]);
    script.install();
    const gateway = new Gateway();

    await gateway.createSession("blank");
    await gateway.getSession("s-1");
    await gateway.putCards("s-1", "g2", 3, [0, 1, 2, 0, 0]);
    await gateway.putRanking("s-1", 4, [["g3"], ["g2"]]);
    await gateway.putCloseness("s-1", 5, "g2", { g3: 19 });
    await gateway.putZ("s-1", 6, {
      kind: "indifference",
      criterion: "g2",
      performance: "15",
    });
    await gateway.attachFleet("s-1", { revision: 7, source: "bundled-raw", lists: "bundled" });
    await gateway.getClassification("s-1");
    await gateway.postSweep("s-1", { baseline: "bundled" });

    expect(script.done).toBe(true);
    expect(script.calls[0].body).toEqual({ source: "blank" });
    expect(script.calls[1].body).toBeUndefined();
    expect(script.calls[2].body).toEqual({ revision: 3, adjacent_cards: [0, 1, 2, 0, 0] });
    expect(script.calls[3].body).toEqual({ revision: 4, groups: [["g3"], ["g2"]] });
    expect(script.calls[4].body).toEqual({
      revision: 5,
      reference: "g2",
      cards_to_reference: { g3: 19 },
    });
    expect(script.calls[5].body).toEqual({
      revision: 6,
      kind: "indifference",
      criterion: "g2",
      performance: "15",
    });
    expect(script.calls[6].body).toEqual({
      revision: 7,
      source: "bundled-raw",
      lists: "bundled",
    });
    expect(script.calls[8].body).toEqual({ baseline: "bundled" });
  });

  it("prefixes a configured base URL", async () => {
    const script = new FetchScript([
      { method: "GET", path: "/api/sessions/s-1", status: 200, response: {} },
    ]);
    script.install();
    await new Gateway("/api").getSession("s-1");
    expect(script.done).toBe(true);
  });
});

describe("error parsing", () => {
  it("exposes the typed error body", async () => {
    const script = new FetchScript([
      {
        method: "PUT",
        path: "/sessions/s-1/closeness",
        status: closenessViolation.status,
        response: closenessViolation.response,
      },
    ]);
    script.install();
    const failure = await new Gateway()
      .putCloseness("s-1", 8, "g2", { g5: 8 })
      .then(() => null)
      .catch((error: unknown) => error);

    expect(failure).toBeInstanceOf(GatewayError);
    const parsed = failure as GatewayError;
    expect(parsed.status).toBe(400);
    expect(parsed.type).toBe("judgment");
    expect(parsed.message).toBe("inconsistent closeness judgments");
    expect(parsed.violations).toEqual([
      { low: "g8", mid: "g5", high: "g2", expected: 9, stated: 7 },
    ]);
  });

  it("falls back to a generic detail when the body is not the error shape", async () => {
    globalThis.fetch = (async () =>
      ({
        ok: false,
        status: 502,
        json: async () => {
          throw new Error("not json");
        },
      }) as unknown as Response) as typeof fetch;

    const failure = await new Gateway()
      .getSession("s-1")
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(GatewayError);
    expect((failure as GatewayError).type).toBe("http-error");
    expect((failure as GatewayError).message).toContain("502");
  });
});
