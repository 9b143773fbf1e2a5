/**
 * Client-side session state.
 *
 * Holds the latest envelope the gateway returned and republishes it to
 * subscribed panes. Two invariants live here:
 *
 *  - revisions only move forward, so a late response can never clobber a
 *    newer envelope;
 *  - a stale-revision rejection becomes a visible conflict notice plus a
 *    fresh GET, never a silent overwrite of the other editor's work.
 */

import { Gateway, GatewayError } from "./gateway";
import type { FleetView, SessionEnvelope } from "./types";

export type StoreListener = () => void;

export class SessionStore {
  private envelopeState: SessionEnvelope | null = null;
  private fleetState: FleetView | null = null;
  private conflictState: string | null = null;
  // True current revision; runs ahead of the envelope after a fleet attach,
  // which bumps the session without changing the judgment document.
  private currentRevision = 0;
  private listeners: StoreListener[] = [];

  constructor(readonly gateway: Gateway) {}

  get envelope(): SessionEnvelope | null {
    return this.envelopeState;
  }

  get fleet(): FleetView | null {
    return this.fleetState;
  }

  get conflict(): string | null {
    return this.conflictState;
  }

  get id(): string {
    if (!this.envelopeState) {
      throw new Error("no active session");
    }
    return this.envelopeState.id;
  }

  get revision(): number {
    return this.currentRevision;
  }

  subscribe(listener: StoreListener): void {
    this.listeners.push(listener);
  }

  async start(source: "blank" | "reference"): Promise<void> {
    this.fleetState = null;
    this.conflictState = null;
    this.currentRevision = 0;
    this.applyEnvelope(await this.gateway.createSession(source));
  }

  /**
   * Run one judgment edit. The callback receives the session id and the
   * revision to send. A stale-revision rejection is absorbed: the store
   * refreshes from the gateway, records the conflict notice and returns
   * false. Judgment errors (inconsistent cards and the like) are rethrown
   * for the owning board to display.
   */
  async mutate(
    edit: (sid: string, revision: number) => Promise<SessionEnvelope>,
  ): Promise<boolean> {
    const sid = this.id;
    try {
      const envelope = await edit(sid, this.currentRevision);
      this.conflictState = null;
      this.applyEnvelope(envelope);
      return true;
    } catch (error) {
      if (error instanceof GatewayError && error.type === "stale-revision") {
        this.conflictState = error.message;
        this.applyEnvelope(await this.gateway.getSession(sid));
        return false;
      }
      throw error;
    }
  }

  async attachFleet(body: {
    csv?: string;
    source?: "bundled-raw" | "bundled-performance";
    lists?: "bundled" | Record<string, unknown>;
    lenient?: boolean;
  }): Promise<void> {
    const sid = this.id;
    try {
      const response = await this.gateway.attachFleet(sid, {
        revision: this.currentRevision,
        ...body,
      });
      this.conflictState = null;
      this.fleetState = response.fleet;
      if (response.revision > this.currentRevision) {
        this.currentRevision = response.revision;
      }
      this.notify();
    } catch (error) {
      if (error instanceof GatewayError && error.type === "stale-revision") {
        this.conflictState = error.message;
        this.applyEnvelope(await this.gateway.getSession(sid));
        return;
      }
      throw error;
    }
  }

  applyEnvelope(envelope: SessionEnvelope): void {
    if (this.envelopeState && envelope.revision < this.envelopeState.revision) {
      return;
    }
    this.envelopeState = envelope;
    if (envelope.revision > this.currentRevision) {
      this.currentRevision = envelope.revision;
    }
    this.notify();
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }
}
