/**
 * Composition root: builds the panes, wires them to the store and keeps the
 * result panes (classification, sweep) in step with the session revision.
 *
 * Fetch discipline: results are requested only when the session is complete
 * and a fleet is attached, and a response is dropped when the session moved
 * on while it was in flight, so nothing derived from a stale revision is
 * ever rendered.
 */

import { CardBoard } from "./components/cardBoard";
import { renderClassificationTable } from "./components/classificationTable";
import { FleetAttachBody, FleetPane } from "./components/fleetPane";
import { IndifferenceDialog } from "./components/indifference";
import { RankingBoard } from "./components/rankingBoard";
import { SweepHeatmap } from "./components/sweepHeatmap";
import { renderWeightBars } from "./components/weightBars";
import { clear, el } from "./dom";
import { Gateway, GatewayError, ZRequestBody } from "./gateway";
import { SessionStore } from "./store";
import type { ClassificationResponse, CriterionView, SweepResponse } from "./types";

export class App {
  readonly store: SessionStore;
  private readonly cardBoards = new Map<string, CardBoard>();
  private readonly rankingBoard: RankingBoard;
  private readonly indifference: IndifferenceDialog;
  private readonly fleetPane: FleetPane;
  private readonly heatmap: SweepHeatmap;
  private readonly boardsBox: HTMLElement;
  private readonly weightsBox: HTMLElement;
  private readonly classificationBox: HTMLElement;
  private readonly conflictBanner: HTMLElement;
  private readonly errorStrip: HTMLElement;
  private readonly problemsBox: HTMLElement;
  private readonly sessionBadge: HTMLElement;

  private classification: ClassificationResponse | null = null;
  private sweep: SweepResponse | null = null;
  private resultsRevision = 0;
  private resultsPending = false;
  private bundledRawFleet = false;
  private queue: Promise<void> = Promise.resolve();

  constructor(
    readonly root: HTMLElement,
    private readonly gateway: Gateway,
  ) {
    this.store = new SessionStore(gateway);

    const bar = el("header", "top-bar");
    bar.appendChild(el("h1", "app-title", "Ship risk profiling console"));
    const blank = el("button", "new-blank", "new blank session");
    blank.type = "button";
    blank.addEventListener("click", () => this.start("blank"));
    const reference = el("button", "new-reference", "load bundled session");
    reference.type = "button";
    reference.addEventListener("click", () => this.start("reference"));
    this.sessionBadge = el("span", "session-badge");
    bar.append(blank, reference, this.sessionBadge);
    root.appendChild(bar);

    this.conflictBanner = el("p", "conflict-banner");
    this.conflictBanner.setAttribute("role", "alert");
    this.conflictBanner.hidden = true;
    root.appendChild(this.conflictBanner);
    this.errorStrip = el("p", "app-error");
    this.errorStrip.setAttribute("role", "alert");
    this.errorStrip.hidden = true;
    root.appendChild(this.errorStrip);
    this.problemsBox = el("ul", "problems");
    root.appendChild(this.problemsBox);

    const main = el("main", "layout");
    this.boardsBox = el("div", "boards");
    main.appendChild(this.boardsBox);

    const side = el("aside", "side");
    this.rankingBoard = new RankingBoard(
      (groups) => this.editRanking(groups),
      (ref, cards) => this.editCloseness(ref, cards),
    );
    side.appendChild(this.rankingBoard.root);
    this.indifference = new IndifferenceDialog((body) => this.editZ(body));
    side.appendChild(this.indifference.root);
    this.weightsBox = el("section", "weights-pane");
    side.appendChild(this.weightsBox);
    main.appendChild(side);

    const results = el("section", "results");
    this.fleetPane = new FleetPane((body) => this.attachFleet(body));
    results.appendChild(this.fleetPane.root);
    this.classificationBox = el("section", "classification-pane");
    results.appendChild(this.classificationBox);
    this.heatmap = new SweepHeatmap();
    results.appendChild(this.heatmap.root);
    main.appendChild(results);
    root.appendChild(main);

    this.store.subscribe(() => this.renderAll());
  }

  start(source: "blank" | "reference"): void {
    this.track(async () => {
      this.classification = null;
      this.sweep = null;
      this.resultsRevision = 0;
      this.bundledRawFleet = false;
      await this.store.start(source);
    });
  }

  /** Resolves once every queued gateway interaction has settled. */
  async whenIdle(): Promise<void> {
    let seen: Promise<void>;
    do {
      seen = this.queue;
      await seen;
    } while (seen !== this.queue);
  }

  private track(task: () => Promise<void>): void {
    this.queue = this.queue.then(task).catch((error) => this.showError(error));
  }

  private showError(error: unknown): void {
    const message = error instanceof Error ? error.message : String(error);
    this.errorStrip.textContent = message;
    this.errorStrip.hidden = false;
  }

  private criteria(): Map<string, CriterionView> {
    const map = new Map<string, CriterionView>();
    for (const criterion of this.store.envelope?.document.framework.criteria ?? []) {
      map.set(criterion.id, criterion);
    }
    return map;
  }

  private renderAll(): void {
    const conflict = this.store.conflict;
    this.conflictBanner.textContent = conflict
      ? `another edit landed first: ${conflict}; the session below was refreshed, restate your change`
      : "";
    this.conflictBanner.hidden = !conflict;
    this.errorStrip.hidden = true;

    const envelope = this.store.envelope;
    if (!envelope) {
      return;
    }
    this.sessionBadge.textContent = `${envelope.id} · revision ${this.store.revision}`;

    clear(this.problemsBox);
    for (const problem of envelope.derived.problems) {
      this.problemsBox.appendChild(el("li", "problem", problem));
    }

    const criteria = this.criteria();
    for (const criterion of envelope.document.framework.criteria) {
      const table = envelope.document.tables[criterion.id];
      if (!table) {
        continue;
      }
      let board = this.cardBoards.get(criterion.id);
      if (!board) {
        board = new CardBoard(criterion, (cards) => this.editCards(criterion.id, cards));
        this.cardBoards.set(criterion.id, board);
        this.boardsBox.appendChild(board.root);
      }
      board.render(
        table,
        envelope.derived.value_functions[criterion.id],
        envelope.validation.tables[criterion.id],
      );
    }

    this.rankingBoard.render({
      swings: envelope.derived.swings,
      ranking: envelope.document.swing_ranking,
      closeness: envelope.document.closeness,
      criteria,
    });
    this.indifference.render({
      ranking: envelope.document.swing_ranking,
      criteria,
      z: envelope.derived.z,
      zSource: envelope.document.z_source,
    });
    renderWeightBars(
      this.weightsBox,
      envelope.derived.weights,
      envelope.document.framework.criteria,
    );
    this.fleetPane.render(this.store.fleet);
    this.renderResults();
    this.scheduleResults();
  }

  private renderResults(): void {
    renderClassificationTable(
      this.classificationBox,
      this.classification,
      this.store.envelope?.document.framework.criteria ?? [],
      this.store.fleet !== null,
    );
    this.heatmap.render(this.sweep);
  }

  private scheduleResults(): void {
    const envelope = this.store.envelope;
    if (!envelope || !envelope.derived.complete || !this.store.fleet) {
      return;
    }
    if (this.resultsPending || this.resultsRevision === this.store.revision) {
      return;
    }
    this.resultsPending = true;
    const target = this.store.revision;
    this.track(async () => {
      try {
        const sid = this.store.id;
        const classification = await this.gateway.getClassification(sid);
        const sweep = await this.gateway.postSweep(
          sid,
          this.bundledRawFleet ? { baseline: "bundled" } : {},
        );
        if (this.store.revision === target) {
          this.classification = classification;
          this.sweep = sweep;
          this.resultsRevision = target;
          this.renderResults();
        }
      } finally {
        this.resultsPending = false;
        if (this.store.revision !== target) {
          this.scheduleResults();
        }
      }
    });
  }

  private editCards(criterionId: string, cards: number[]): void {
    this.track(async () => {
      try {
        await this.store.mutate((sid, revision) =>
          this.gateway.putCards(sid, criterionId, revision, cards),
        );
      } catch (error) {
        if (error instanceof GatewayError) {
          this.cardBoards.get(criterionId)?.showJudgmentError(error);
          return;
        }
        throw error;
      }
    });
  }

  private editRanking(groups: string[][]): void {
    this.track(async () => {
      try {
        await this.store.mutate((sid, revision) =>
          this.gateway.putRanking(sid, revision, groups),
        );
      } catch (error) {
        if (error instanceof GatewayError) {
          this.rankingBoard.showError(error);
          return;
        }
        throw error;
      }
    });
  }

  private editCloseness(reference: string, cards: Record<string, number>): void {
    this.track(async () => {
      try {
        await this.store.mutate((sid, revision) =>
          this.gateway.putCloseness(sid, revision, reference, cards),
        );
      } catch (error) {
        if (error instanceof GatewayError) {
          this.rankingBoard.showError(error);
          return;
        }
        throw error;
      }
    });
  }

  private editZ(body: ZRequestBody): void {
    this.track(async () => {
      try {
        await this.store.mutate((sid, revision) => this.gateway.putZ(sid, revision, body));
      } catch (error) {
        if (error instanceof GatewayError) {
          this.indifference.showRejection(error.message);
          return;
        }
        throw error;
      }
    });
  }

  private attachFleet(body: FleetAttachBody): void {
    this.track(async () => {
      this.bundledRawFleet = body.source === "bundled-raw";
      await this.store.attachFleet(body);
    });
  }
}

export function buildApp(root: HTMLElement, gateway: Gateway = new Gateway()): App {
  return new App(root, gateway);
}
