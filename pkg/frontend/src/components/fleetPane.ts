/**
 * Fleet attachment controls: the bundled sample fleets one click away, or an
 * uploaded CSV (raw inspection records, mapped with the bundled reference
 * lists). Status and mapping warnings come straight from the gateway.
 */

import { clear, el } from "../dom";
import type { FleetView } from "../types";

export interface FleetAttachBody {
  csv?: string;
  source?: "bundled-raw" | "bundled-performance";
  lists?: "bundled" | Record<string, unknown>;
  lenient?: boolean;
}

export class FleetPane {
  readonly root: HTMLElement;
  private readonly status: HTMLElement;

  constructor(private readonly onAttach: (body: FleetAttachBody) => void) {
    this.root = el("section", "fleet-pane");
    this.root.appendChild(el("h3", "board-title", "Fleet"));

    const bundledRaw = el("button", "fleet-bundled-raw", "attach bundled fleet (raw records)");
    bundledRaw.type = "button";
    bundledRaw.addEventListener("click", () =>
      this.onAttach({ source: "bundled-raw", lists: "bundled" }),
    );
    const bundledPerf = el(
      "button",
      "fleet-bundled-performance",
      "attach bundled fleet (performance levels)",
    );
    bundledPerf.type = "button";
    bundledPerf.addEventListener("click", () =>
      this.onAttach({ source: "bundled-performance" }),
    );

    const lenient = el("input", "fleet-lenient");
    lenient.type = "checkbox";
    const lenientLabel = el("label", "fleet-lenient-label");
    lenientLabel.append(lenient, " map unknown tokens to the worst level with a warning");

    const file = el("input", "fleet-file");
    file.type = "file";
    file.accept = ".csv,text/csv";
    file.addEventListener("change", () => {
      const chosen = file.files?.[0];
      if (!chosen) {
        return;
      }
      void chosen.text().then((csv) => {
        this.onAttach({ csv, lists: "bundled", lenient: lenient.checked });
        file.value = "";
      });
    });

    const controls = el("div", "fleet-controls");
    controls.append(bundledRaw, bundledPerf, file, lenientLabel);
    this.root.appendChild(controls);
    this.status = el("div", "fleet-status");
    this.root.appendChild(this.status);
    this.render(null);
  }

  render(fleet: FleetView | null): void {
    clear(this.status);
    if (!fleet) {
      this.status.appendChild(el("p", "pane-empty", "no fleet attached"));
      return;
    }
    this.status.appendChild(
      el(
        "p",
        "fleet-summary",
        `${fleet.ships.length} ships (${fleet.mode} input${fleet.lenient ? ", lenient mapping" : ""})`,
      ),
    );
    for (const note of fleet.notes) {
      this.status.appendChild(el("p", "fleet-note", note));
    }
    for (const warning of fleet.warnings) {
      this.status.appendChild(
        el(
          "p",
          "warning-note",
          `${warning.ship} ${warning.criterion}: "${warning.token}" read as ${warning.assigned_level}`,
        ),
      );
    }
  }
}
