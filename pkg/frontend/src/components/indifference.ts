/**
 * Indifference dialog fixing the top-to-bottom swing ratio z.
 *
 * The analyst degrades the top swing until it feels equivalent to the
 * weakest swing at its best. The chosen performance goes to the gateway,
 * which answers with z; the badge shows exactly what came back. Positions at
 * either end of the scale leave z undefined, so the dialog refuses to submit
 * them.
 */

import { clear, el } from "../dom";
import type { ZRequestBody } from "../gateway";
import type { CriterionView, ExactNumber, ZSourceView } from "../types";

export interface IndifferenceData {
  ranking: string[][] | null;
  criteria: Map<string, CriterionView>;
  z: ExactNumber | null;
  zSource: ZSourceView | null;
}

export class IndifferenceDialog {
  readonly root: HTMLElement;
  private readonly body: HTMLElement;
  private readonly badge: HTMLElement;
  private readonly hint: HTMLElement;

  constructor(private readonly onZ: (body: ZRequestBody) => void) {
    this.root = el("section", "indifference");
    const head = el("div", "indifference-head");
    head.appendChild(el("h3", "board-title", "Indifference check"));
    this.badge = el("span", "z-badge", "z · –");
    head.appendChild(this.badge);
    this.root.appendChild(head);
    this.body = el("div", "indifference-body");
    this.root.appendChild(this.body);
    this.hint = el("p", "board-error");
    this.hint.hidden = true;
    this.root.appendChild(this.hint);
  }

  showRejection(message: string): void {
    this.hint.textContent = message;
    this.hint.hidden = false;
  }

  render(data: IndifferenceData): void {
    clear(this.body);
    this.hint.hidden = true;
    this.hint.textContent = "";
    if (data.z) {
      this.badge.textContent = `z · ${data.z.display}`;
      this.badge.title = `exact z = ${data.z.exact}`;
    } else {
      this.badge.textContent = "z · –";
      this.badge.removeAttribute("title");
    }

    const ranking = data.ranking;
    if (!ranking || ranking.length < 2) {
      this.body.appendChild(
        el("p", "pane-empty", "rank the swings first, then state the indifference"),
      );
      return;
    }
    const topId = ranking[ranking.length - 1][0];
    const bottomId = ranking[0][0];
    const top = data.criteria.get(topId);
    const bottom = data.criteria.get(bottomId);
    if (!top || !bottom) {
      return;
    }

    this.body.appendChild(
      el(
        "p",
        "indifference-question",
        `a ship best only on ${bottom.code} matches the ${top.code} swing degraded to:`,
      ),
    );
    if (top.continuous && top.anchors?.length) {
      this.body.appendChild(this.buildSlider(top, data.zSource));
    } else {
      this.body.appendChild(this.buildLevelPicker(top, data.zSource));
    }
  }

  private buildSlider(top: CriterionView, source: ZSourceView | null): HTMLElement {
    const wrap = el("div", "slider-wrap");
    const numbers = (top.anchors ?? []).map(Number);
    const min = Math.min(...numbers);
    const max = Math.max(...numbers);
    const slider = el("input", "indifference-slider");
    slider.type = "range";
    slider.min = String(min);
    slider.max = String(max);
    slider.step = "1";
    const current =
      source?.kind === "indifference" && source.criterion === top.id
        ? source.performance
        : undefined;
    slider.value = current ?? String(Math.round((min + max) / 2));
    const readout = el("span", "slider-readout", `${top.name}: ${slider.value}`);
    slider.addEventListener("input", () => {
      readout.textContent = `${top.name}: ${slider.value}`;
    });
    slider.addEventListener("change", () => {
      const value = Number(slider.value);
      if (value <= min || value >= max) {
        this.hint.textContent = "z is undefined at the scale boundary; pick an interior position";
        this.hint.hidden = false;
        return;
      }
      this.hint.hidden = true;
      this.onZ({ kind: "indifference", criterion: top.id, performance: slider.value });
    });
    wrap.append(slider, readout);
    return wrap;
  }

  private buildLevelPicker(top: CriterionView, source: ZSourceView | null): HTMLElement {
    const wrap = el("div", "slider-wrap");
    const select = el("select", "indifference-level");
    // interior levels only: either end leaves the ratio undefined
    for (const level of top.levels.slice(1, -1)) {
      const option = el("option", undefined, level);
      option.value = level;
      select.appendChild(option);
    }
    if (source?.kind === "indifference" && source.criterion === top.id && source.performance) {
      select.value = source.performance;
    }
    select.addEventListener("change", () => {
      this.onZ({ kind: "indifference", criterion: top.id, performance: select.value });
    });
    wrap.appendChild(select);
    return wrap;
  }
}
