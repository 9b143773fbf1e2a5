/**
 * Swing ranking board with closeness cards.
 *
 * Each chip is one dummy ship: worst everywhere except best on a single
 * criterion. Chips start in a pool and are dragged into ranked slots, least
 * important swing first; dropping a chip onto an occupied slot records a tie,
 * dropping it onto a gap opens a new rank. Once every chip is placed the
 * grouping is sent to the gateway. Below the slots, closeness cards state how
 * far each rank sits from the top swing.
 */

import { clear, el } from "../dom";
import { GatewayError } from "../gateway";
import type { ClosenessView, CriterionView, SwingView } from "../types";

const SWING_PREFIX = "swing:";

export interface RankingData {
  swings: SwingView[];
  ranking: string[][] | null;
  closeness: ClosenessView | null;
  criteria: Map<string, CriterionView>;
}

export class RankingBoard {
  readonly root: HTMLElement;
  private readonly poolBox: HTMLElement;
  private readonly slotList: HTMLElement;
  private readonly closenessBox: HTMLElement;
  private readonly errorBox: HTMLElement;
  private groups: string[][] = [];
  private pool: string[] = [];
  private draftDirty = false;
  private data: RankingData = {
    swings: [],
    ranking: null,
    closeness: null,
    criteria: new Map(),
  };

  constructor(
    private readonly onRanking: (groups: string[][]) => void,
    private readonly onCloseness: (
      reference: string,
      cards: Record<string, number>,
    ) => void,
  ) {
    this.root = el("section", "ranking-board");
    this.root.appendChild(el("h3", "board-title", "Swing ranking"));
    this.root.appendChild(
      el(
        "p",
        "board-hint",
        "drag each dummy ship into the ladder, least important swing first; drop onto an occupied rank to tie",
      ),
    );
    this.poolBox = el("div", "swing-pool");
    this.allowDrop(this.poolBox, (cid) => this.moveToPool(cid));
    this.root.appendChild(this.poolBox);
    this.slotList = el("ol", "rank-slots");
    this.root.appendChild(this.slotList);
    this.errorBox = el("p", "board-error");
    this.errorBox.hidden = true;
    this.root.appendChild(this.errorBox);
    this.closenessBox = el("div", "closeness");
    this.root.appendChild(this.closenessBox);
  }

  render(data: RankingData): void {
    this.data = data;
    if (!this.draftDirty) {
      this.groups = (data.ranking ?? []).map((group) => [...group]);
    }
    const placed = new Set(this.groups.flat());
    this.pool = data.swings
      .map((swing) => swing.criterion)
      .filter((cid) => !placed.has(cid));
    this.errorBox.hidden = true;
    this.errorBox.textContent = "";
    this.rebuild();
  }

  showError(error: GatewayError): void {
    this.errorBox.textContent = error.message;
    this.errorBox.hidden = false;
    for (const violation of error.violations) {
      for (const cid of [violation.low, violation.mid, violation.high]) {
        for (const node of this.closenessBox.querySelectorAll<HTMLElement>(
          `[data-members~="${cid}"]`,
        )) {
          node.classList.add("violation");
        }
      }
    }
  }

  private rebuild(): void {
    clear(this.poolBox);
    if (this.pool.length) {
      this.poolBox.appendChild(el("span", "pool-label", "unranked swings:"));
      for (const cid of this.pool) {
        this.poolBox.appendChild(this.buildChip(cid));
      }
    } else {
      this.poolBox.appendChild(el("span", "pool-label", "all swings ranked"));
    }

    clear(this.slotList);
    this.slotList.appendChild(this.buildSlotGap(0));
    this.groups.forEach((group, index) => {
      const slot = el("li", "rank-slot");
      slot.dataset.slot = String(index);
      const tag =
        index === this.groups.length - 1 && this.pool.length === 0
          ? `rank ${index + 1} (strongest swing)`
          : `rank ${index + 1}`;
      slot.appendChild(el("span", "slot-tag", tag));
      for (const cid of group) {
        slot.appendChild(this.buildChip(cid));
      }
      this.allowDrop(slot, (cid) => this.moveToGroup(cid, index));
      this.slotList.appendChild(slot);
      this.slotList.appendChild(this.buildSlotGap(index + 1));
    });

    this.rebuildCloseness();
  }

  private rebuildCloseness(): void {
    clear(this.closenessBox);
    const ranking = this.data.ranking;
    if (!ranking || ranking.length < 2) {
      return;
    }
    this.closenessBox.appendChild(el("h4", "board-subtitle", "Closeness cards"));
    const reference = ranking[ranking.length - 1][0];
    const refBadge = el(
      "p",
      "closeness-reference",
      `cards between each rank and the top swing ${this.label(reference)}`,
    );
    refBadge.dataset.reference = reference;
    refBadge.dataset.members = ranking[ranking.length - 1].join(" ");
    this.closenessBox.appendChild(refBadge);

    const stored = this.data.closeness;
    for (let index = ranking.length - 2; index >= 0; index -= 1) {
      const group = ranking[index];
      const row = el("div", "closeness-row");
      row.dataset.members = group.join(" ");
      row.appendChild(
        el("span", "closeness-label", group.map((cid) => this.label(cid)).join(" = ")),
      );
      const input = el("input", "closeness-count");
      input.type = "number";
      input.min = "0";
      input.dataset.group = String(index);
      const existing = stored?.cards_to_reference[group[0]];
      input.value = existing === undefined ? "" : String(existing);
      row.appendChild(input);
      row.appendChild(el("span", "closeness-unit", "cards to reference"));
      this.closenessBox.appendChild(row);
    }

    const submit = el("button", "closeness-submit", "record closeness cards");
    submit.type = "button";
    submit.addEventListener("click", () => this.submitCloseness(reference, ranking));
    this.closenessBox.appendChild(submit);
  }

  private submitCloseness(reference: string, ranking: string[][]): void {
    const cards: Record<string, number> = {};
    for (let index = 0; index < ranking.length - 1; index += 1) {
      const input = this.closenessBox.querySelector<HTMLInputElement>(
        `input[data-group="${index}"]`,
      );
      const count = Number.parseInt(input?.value ?? "", 10);
      if (!Number.isInteger(count) || count < 0) {
        this.errorBox.textContent = "every rank needs a card count before recording";
        this.errorBox.hidden = false;
        return;
      }
      for (const cid of ranking[index]) {
        cards[cid] = count;
      }
    }
    this.errorBox.hidden = true;
    this.onCloseness(reference, cards);
  }

  private buildChip(cid: string): HTMLElement {
    const chip = el("span", "swing-chip", this.label(cid));
    chip.draggable = true;
    chip.dataset.swing = cid;
    const criterion = this.data.criteria.get(cid);
    if (criterion) {
      chip.title = `best only on ${criterion.name}`;
    }
    chip.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/plain", SWING_PREFIX + cid);
    });
    return chip;
  }

  private buildSlotGap(position: number): HTMLElement {
    const gap = el("li", "slot-gap");
    gap.dataset.slotGap = String(position);
    this.allowDrop(gap, (cid) => this.insertGroup(cid, position));
    return gap;
  }

  private allowDrop(node: HTMLElement, handle: (cid: string) => void): void {
    node.addEventListener("dragover", (event) => event.preventDefault());
    node.addEventListener("drop", (event) => {
      event.preventDefault();
      event.stopPropagation();
      const data = event.dataTransfer?.getData("text/plain") ?? "";
      if (data.startsWith(SWING_PREFIX)) {
        handle(data.slice(SWING_PREFIX.length));
      }
    });
  }

  private label(cid: string): string {
    const swing = this.data.swings.find((s) => s.criterion === cid);
    const code = this.data.criteria.get(cid)?.code ?? cid;
    return swing ? `${swing.id} ${code}` : code;
  }

  private moveToGroup(cid: string, slotIndex: number): void {
    const target = this.groups[slotIndex];
    if (!target || (target.includes(cid) && target.length === 1)) {
      return;
    }
    this.removeEverywhere(cid);
    target.push(cid);
    this.groups = this.groups.filter((group) => group.length > 0);
    this.afterDrop();
  }

  private insertGroup(cid: string, position: number): void {
    const anchors = this.groups.slice(position);
    this.removeEverywhere(cid);
    this.groups = this.groups.filter((group) => group.length > 0);
    let index = this.groups.length;
    for (const anchor of anchors) {
      const found = this.groups.indexOf(anchor);
      if (found !== -1) {
        index = found;
        break;
      }
    }
    this.groups.splice(index, 0, [cid]);
    this.afterDrop();
  }

  private moveToPool(cid: string): void {
    this.removeEverywhere(cid);
    this.groups = this.groups.filter((group) => group.length > 0);
    if (!this.pool.includes(cid)) {
      this.pool.push(cid);
    }
    this.draftDirty = true;
    this.rebuild();
  }

  private removeEverywhere(cid: string): void {
    this.pool = this.pool.filter((other) => other !== cid);
    for (const group of this.groups) {
      const at = group.indexOf(cid);
      if (at !== -1) {
        group.splice(at, 1);
      }
    }
  }

  private afterDrop(): void {
    this.pool = this.pool.filter((cid) => !this.groups.flat().includes(cid));
    this.draftDirty = true;
    this.rebuild();
    if (this.pool.length === 0 && this.groups.length > 0) {
      this.draftDirty = false;
      this.onRanking(this.groups.map((group) => [...group]));
    }
  }
}
