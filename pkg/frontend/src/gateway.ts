/**
 * Typed HTTP client for the risk service.
 *
 * All judgment edits send the caller's revision; a concurrent edit elsewhere
 * surfaces as a GatewayError with type "stale-revision" which the store turns
 * into a visible refresh. The client never interprets numbers, it only moves
 * typed payloads.
 */

import type {
  ClassificationResponse,
  ErrorDetail,
  FleetRequestBody,
  FleetResponse,
  SessionEnvelope,
  SweepRequestBody,
  SweepResponse,
  Violation,
} from "./types";

export class GatewayError extends Error {
  readonly status: number;
  readonly type: string;
  readonly violations: Violation[];
  readonly problems: string[];

  constructor(status: number, detail: ErrorDetail) {
    super(detail.message);
    this.name = "GatewayError";
    this.status = status;
    this.type = detail.type;
    this.violations = detail.violations ?? [];
    this.problems = detail.problems ?? [];
  }
}

export interface ZRequestBody {
  kind: "indifference" | "explicit";
  criterion?: string;
  performance?: string;
  value?: string;
}

export class Gateway {
  // Empty base means same-origin requests; the service does not send CORS
  // headers, so a cross-origin base needs a reverse proxy in front.
  constructor(private readonly base: string = "") {}

  async createSession(source: "blank" | "reference"): Promise<SessionEnvelope> {
    return this.request("POST", "/sessions", { source });
  }

  async getSession(sid: string): Promise<SessionEnvelope> {
    return this.request("GET", `/sessions/${sid}`);
  }

  async putCards(
    sid: string,
    criterion: string,
    revision: number,
    adjacentCards: number[],
  ): Promise<SessionEnvelope> {
    return this.request("PUT", `/sessions/${sid}/tables/${criterion}/cards`, {
      revision,
      adjacent_cards: adjacentCards,
    });
  }

  async putRanking(
    sid: string,
    revision: number,
    groups: string[][],
  ): Promise<SessionEnvelope> {
    return this.request("PUT", `/sessions/${sid}/ranking`, { revision, groups });
  }

  async putCloseness(
    sid: string,
    revision: number,
    reference: string,
    cardsToReference: Record<string, number>,
  ): Promise<SessionEnvelope> {
    return this.request("PUT", `/sessions/${sid}/closeness`, {
      revision,
      reference,
      cards_to_reference: cardsToReference,
    });
  }

  async putZ(sid: string, revision: number, body: ZRequestBody): Promise<SessionEnvelope> {
    return this.request("PUT", `/sessions/${sid}/z`, { revision, ...body });
  }

  async attachFleet(sid: string, body: FleetRequestBody): Promise<FleetResponse> {
    return this.request("POST", `/sessions/${sid}/fleet`, body);
  }

  async getFleet(sid: string): Promise<FleetResponse> {
    return this.request("GET", `/sessions/${sid}/fleet`);
  }

  async getClassification(sid: string): Promise<ClassificationResponse> {
    return this.request("GET", `/sessions/${sid}/classification`);
  }

  async postSweep(sid: string, body: SweepRequestBody): Promise<SweepResponse> {
    return this.request("POST", `/sessions/${sid}/sweep`, body);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.base + path, init);
    if (!response.ok) {
      throw new GatewayError(response.status, await readErrorDetail(response));
    }
    return (await response.json()) as T;
  }
}

async function readErrorDetail(response: Response): Promise<ErrorDetail> {
  try {
    const payload = (await response.json()) as { error?: ErrorDetail };
    if (payload.error && typeof payload.error.message === "string") {
      return {
        type: payload.error.type ?? "unknown",
        message: payload.error.message,
        violations: payload.error.violations ?? [],
        problems: payload.error.problems ?? [],
      };
    }
  } catch {
    // fall through to the generic detail
  }
  return {
    type: "http-error",
    message: `request failed with status ${response.status}`,
    violations: [],
    problems: [],
  };
}
