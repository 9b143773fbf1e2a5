/**
 * Robustness heatmap over the (lambda, z) grid.
 *
 * Default view shows category counts per cell; picking a ship switches the
 * cells to that ship's category. When the sweep carried a baseline, cells
 * whose labels differ from it are highlighted from the gateway's diff flags.
 * All cell content is copied from the sweep response.
 */

import { clear, el } from "../dom";
import type { SweepCellView, SweepDiffCellView, SweepResponse } from "../types";

export class SweepHeatmap {
  readonly root: HTMLElement;
  private readonly shipSelect: HTMLSelectElement;
  private readonly gridBox: HTMLElement;
  private readonly note: HTMLElement;
  private response: SweepResponse | null = null;

  constructor() {
    this.root = el("section", "sweep-pane");
    const head = el("div", "sweep-head");
    head.appendChild(el("h3", "board-title", "Scenario sweep"));
    this.shipSelect = el("select", "sweep-ship");
    this.shipSelect.addEventListener("change", () => this.rebuildGrid());
    head.appendChild(this.shipSelect);
    this.root.appendChild(head);
    this.note = el("p", "sweep-note");
    this.note.hidden = true;
    this.root.appendChild(this.note);
    this.gridBox = el("div", "sweep-grid");
    this.root.appendChild(this.gridBox);
  }

  render(response: SweepResponse | null): void {
    this.response = response;
    const previous = this.shipSelect.value;
    clear(this.shipSelect);
    const countsOption = el("option", undefined, "category counts");
    countsOption.value = "";
    this.shipSelect.appendChild(countsOption);
    if (response?.cells.length) {
      for (const ship of Object.keys(response.cells[0].categories).sort()) {
        const option = el("option", undefined, ship);
        option.value = ship;
        this.shipSelect.appendChild(option);
      }
      if ([...this.shipSelect.options].some((option) => option.value === previous)) {
        this.shipSelect.value = previous;
      }
    }
    this.note.hidden = !response?.diff;
    this.note.textContent = response?.diff
      ? "highlighted cells differ from the baseline labels"
      : "";
    this.rebuildGrid();
  }

  private rebuildGrid(): void {
    clear(this.gridBox);
    const response = this.response;
    if (!response) {
      this.gridBox.appendChild(
        el("p", "pane-empty", "attach a fleet to sweep the cutoff and z scenarios"),
      );
      return;
    }
    const ship = this.shipSelect.value;
    const byKey = new Map<string, SweepCellView>();
    for (const cell of response.cells) {
      byKey.set(`${cell.z}|${cell.lambda_23}`, cell);
    }
    const diffByKey = new Map<string, SweepDiffCellView>();
    for (const cell of response.diff ?? []) {
      diffByKey.set(`${cell.z}|${cell.lambda_23}`, cell);
    }

    const table = el("table", "sweep-table");
    const head = el("tr");
    head.appendChild(el("th", undefined, "z \\ λ23"));
    for (const lambda of response.lambda_values) {
      head.appendChild(el("th", undefined, lambda));
    }
    table.appendChild(head);

    for (const z of response.z_values) {
      const row = el("tr");
      row.appendChild(el("th", undefined, z));
      for (const lambda of response.lambda_values) {
        const key = `${z}|${lambda}`;
        const cell = byKey.get(key);
        const td = el("td", "sweep-cell");
        td.dataset.z = z;
        td.dataset.lambda = lambda;
        if (cell) {
          if (ship) {
            const category = cell.categories[ship] ?? "";
            td.textContent = category;
            td.classList.add(`cat-${category}`);
            if (diffByKey.get(key)?.flags[ship]) {
              td.classList.add("diff");
            }
          } else {
            td.textContent = ["C1", "C2", "C3"]
              .map((cat) => String(cell.counts[cat] ?? 0))
              .join("/");
            const flags = diffByKey.get(key)?.flags ?? {};
            if (Object.values(flags).some(Boolean)) {
              td.classList.add("diff");
            }
          }
        }
        row.appendChild(td);
      }
      table.appendChild(row);
    }
    this.gridBox.appendChild(table);
  }
}
