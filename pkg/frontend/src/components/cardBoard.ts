/**
 * Card insertion board for one criterion.
 *
 * Levels are laid out worst to best with a gap between each adjacent pair.
 * Dropping a blank card on a gap (or using the +/- buttons) adjusts a local
 * draft of the card counts; "state judgment" sends the whole vector to the
 * gateway, mirroring how a full deck is read in one go. The board re-renders
 * from the returned envelope. A rejected judgment shows the gateway's
 * message and highlights the offending triple.
 */

import { clear, el } from "../dom";
import { GatewayError } from "../gateway";
import type {
  ConsistencyReportView,
  CriterionView,
  TableView,
  ValueFunctionView,
  Violation,
} from "../types";
import { renderValueFunctionPlot } from "./vfPlot";

const BLANK_CARD_DATA = "blank-card";

export class CardBoard {
  readonly root: HTMLElement;
  private readonly row: HTMLElement;
  private readonly plotHolder: HTMLElement;
  private readonly errorBox: HTMLElement;
  private readonly submit: HTMLButtonElement;
  private cards: number[] = [];
  private committed: number[] = [];

  constructor(
    private readonly criterion: CriterionView,
    private readonly onCards: (adjacent: number[]) => void,
  ) {
    this.root = el("section", "card-board");
    this.root.dataset.criterion = criterion.id;
    const title = el("h3", "board-title", `${criterion.code} · ${criterion.name}`);
    title.title = `${criterion.point_of_view} / ${criterion.significance_axis}`;
    this.root.appendChild(title);
    this.row = el("div", "level-row");
    this.root.appendChild(this.row);
    const tray = this.buildTray();
    this.submit = el("button", "submit-cards", "state judgment");
    this.submit.type = "button";
    this.submit.addEventListener("click", () => this.onCards([...this.cards]));
    tray.appendChild(this.submit);
    this.root.appendChild(tray);
    this.errorBox = el("p", "board-error");
    this.errorBox.hidden = true;
    this.root.appendChild(this.errorBox);
    this.plotHolder = el("div", "plot-holder");
    this.root.appendChild(this.plotHolder);
  }

  render(table: TableView, vf?: ValueFunctionView, report?: ConsistencyReportView): void {
    this.committed = [...table.adjacent_cards];
    this.cards = [...table.adjacent_cards];
    this.errorBox.hidden = true;
    this.errorBox.textContent = "";
    this.rebuildRow();
    clear(this.plotHolder);
    if (vf) {
      this.plotHolder.appendChild(renderValueFunctionPlot(vf, this.criterion));
    }
    if (report && !report.ok) {
      this.highlight(report.violations);
    }
  }

  showJudgmentError(error: GatewayError): void {
    this.errorBox.textContent = error.message;
    this.errorBox.hidden = false;
    this.highlight(error.violations);
  }

  private highlight(violations: Violation[]): void {
    for (const violation of violations) {
      for (const level of [violation.low, violation.mid, violation.high]) {
        const node = this.row.querySelector<HTMLElement>(
          `.level-card[data-level="${level}"]`,
        );
        node?.classList.add("violation");
      }
    }
  }

  private rebuildRow(): void {
    clear(this.row);
    const levels = this.criterion.levels;
    for (let i = 0; i < levels.length; i += 1) {
      const card = el("div", "level-card", levels[i]);
      card.dataset.level = levels[i];
      this.row.appendChild(card);
      if (i < levels.length - 1) {
        this.row.appendChild(this.buildGap(i));
      }
    }
    const dirty = this.cards.some((count, i) => count !== this.committed[i]);
    this.root.classList.toggle("dirty", dirty);
  }

  private buildGap(index: number): HTMLElement {
    const gap = el("div", "gap");
    gap.dataset.gap = String(index);
    const dec = el("button", "gap-dec", "−");
    dec.type = "button";
    dec.addEventListener("click", () => this.adjust(index, -1));
    const count = el("span", "gap-count", String(this.cards[index]));
    const inc = el("button", "gap-inc", "+");
    inc.type = "button";
    inc.addEventListener("click", () => this.adjust(index, +1));
    gap.append(dec, count, inc);
    gap.addEventListener("dragover", (event) => event.preventDefault());
    gap.addEventListener("drop", (event) => {
      event.preventDefault();
      if (event.dataTransfer?.getData("text/plain") === BLANK_CARD_DATA) {
        this.adjust(index, +1);
      }
    });
    return gap;
  }

  private buildTray(): HTMLElement {
    const tray = el("div", "tray");
    const blank = el("span", "blank-card", "blank card");
    blank.draggable = true;
    blank.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/plain", BLANK_CARD_DATA);
    });
    tray.appendChild(blank);
    tray.appendChild(el("span", "tray-hint", "drag onto a gap to widen it"));
    return tray;
  }

  private adjust(index: number, delta: number): void {
    const next = Math.max(0, this.cards[index] + delta);
    if (next === this.cards[index]) {
      return;
    }
    this.cards[index] = next;
    this.rebuildRow();
  }
}
