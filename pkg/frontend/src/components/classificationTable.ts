/**
 * Live classification pane. Renders the gateway's ship results verbatim:
 * one row per ship with per-criterion contributions, the aggregate score and
 * the assigned category. Without a fleet it shows an empty state instead.
 */

import { clear, el } from "../dom";
import type { ClassificationResponse, CriterionView } from "../types";

export function renderClassificationTable(
  container: HTMLElement,
  response: ClassificationResponse | null,
  criteria: CriterionView[],
  fleetAttached: boolean,
): void {
  clear(container);
  container.appendChild(el("h3", "board-title", "Classification"));
  if (!fleetAttached) {
    container.appendChild(
      el("p", "pane-empty", "no fleet uploaded; attach one to classify ships"),
    );
    return;
  }
  if (!response) {
    container.appendChild(el("p", "pane-empty", "waiting for the gateway"));
    return;
  }

  const counts = el("p", "class-counts");
  counts.textContent = ["C1", "C2", "C3"]
    .map((cat) => `${cat}: ${response.counts[cat] ?? 0}`)
    .join(" · ");
  container.appendChild(counts);

  const columns = criteria.filter((criterion) =>
    response.results.some((result) => criterion.id in result.contributions),
  );
  const table = el("table", "class-table");
  const head = el("tr");
  head.appendChild(el("th", undefined, "ship"));
  for (const criterion of columns) {
    head.appendChild(el("th", undefined, criterion.code));
  }
  head.appendChild(el("th", undefined, "total"));
  head.appendChild(el("th", undefined, "category"));
  table.appendChild(head);

  for (const result of response.results) {
    const row = el("tr", "ship-row");
    row.dataset.ship = result.ship;
    row.classList.add(`cat-${result.category}`);
    row.appendChild(el("td", "ship-id", result.ship));
    for (const criterion of columns) {
      const contribution = result.contributions[criterion.id];
      const cell = el("td", "contribution", contribution?.display ?? "");
      if (contribution) {
        cell.title = `exact ${contribution.exact}`;
      }
      row.appendChild(cell);
    }
    const total = el("td", "ship-total", result.total.display);
    total.title = `exact ${result.total.exact}`;
    row.appendChild(total);
    const category = el("td", "ship-category", result.category);
    category.title = result.trace.join("; ");
    row.appendChild(category);
    table.appendChild(row);
  }
  container.appendChild(table);

  for (const [ship, reason] of Object.entries(response.overrides)) {
    container.appendChild(el("p", "override-note", `${ship}: ${reason}`));
  }
  for (const warning of response.warnings) {
    container.appendChild(
      el(
        "p",
        "warning-note",
        `${warning.ship} ${warning.criterion}: "${warning.token}" read as ${warning.assigned_level}`,
      ),
    );
  }
}
