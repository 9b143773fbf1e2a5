/**
 * Weight bars. Pure rendering: bar lengths come from parsing the display
 * strings for geometry, the printed figures are the strings themselves.
 */

import { clear, el } from "../dom";
import type { CriterionView, WeightsView } from "../types";

export function renderWeightBars(
  container: HTMLElement,
  weights: WeightsView | null,
  criteria: CriterionView[],
): void {
  clear(container);
  container.appendChild(el("h3", "board-title", "Weights"));
  if (!weights) {
    container.appendChild(
      el("p", "pane-empty", "weights appear once ranking, closeness and z are stated"),
    );
    return;
  }
  const meta = el(
    "p",
    "weights-meta",
    `z = ${weights.z.display} · unit αw = ${weights.alpha_w.display}`,
  );
  meta.title = `exact: z = ${weights.z.exact}, αw = ${weights.alpha_w.exact}`;
  container.appendChild(meta);

  const list = el("div", "weight-list");
  for (const criterion of criteria) {
    const value = weights.normalized[criterion.id];
    if (!value) {
      continue;
    }
    const row = el("div", "weight-row");
    row.dataset.criterion = criterion.id;
    row.appendChild(el("span", "weight-code", criterion.code));
    const track = el("div", "weight-track");
    const bar = el("div", "weight-bar");
    const share = Number.parseFloat(value.display);
    bar.style.width = `${Math.max(0, Math.min(1, share)) * 100}%`;
    track.appendChild(bar);
    row.appendChild(track);
    const label = el("span", "weight-value", value.display);
    label.title = `exact ${value.exact}, raw ${weights.raw[criterion.id]?.display ?? "?"}`;
    row.appendChild(label);
    list.appendChild(row);
  }
  container.appendChild(list);
}
