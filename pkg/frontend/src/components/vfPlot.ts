/**
 * SVG sketch of one value function.
 *
 * Coordinates are parsed from the gateway's display strings purely to place
 * geometry; every visible number is the display string itself.
 */

import { el, svgEl } from "../dom";
import type { CriterionView, ValueFunctionView } from "../types";

const WIDTH = 260;
const HEIGHT = 120;
const PAD = 18;

export function renderValueFunctionPlot(
  vf: ValueFunctionView,
  criterion: CriterionView,
): HTMLElement {
  const wrap = el("figure", "vf-plot");
  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
  });
  svg.classList.add("vf-plot-svg");

  const keys = vf.points.map((p) => p.key);
  const xs = vf.points.map((p, i) => (criterion.continuous ? Number(p.key) : i));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const span = xMax - xMin || 1;

  const toX = (x: number) => PAD + ((x - xMin) / span) * (WIDTH - 2 * PAD);
  const toY = (value: string) => {
    const v = Number.parseFloat(value);
    return HEIGHT - PAD - (v / 100) * (HEIGHT - 2 * PAD);
  };

  const coords = vf.points.map((p, i) => ({
    x: toX(xs[i]),
    y: toY(p.value.display),
    label: p.value.display,
    key: keys[i],
  }));
  coords.sort((a, b) => a.x - b.x);

  svg.appendChild(
    svgEl("polyline", {
      points: coords.map((c) => `${c.x.toFixed(1)},${c.y.toFixed(1)}`).join(" "),
      class: "vf-line",
      fill: "none",
    }),
  );
  for (const c of coords) {
    svg.appendChild(
      svgEl("circle", { cx: c.x.toFixed(1), cy: c.y.toFixed(1), r: "3", class: "vf-dot" }),
    );
    const label = svgEl("text", {
      x: c.x.toFixed(1),
      y: (c.y - 6).toFixed(1),
      class: "vf-value",
      "text-anchor": "middle",
    });
    label.textContent = c.label;
    svg.appendChild(label);
    const tick = svgEl("text", {
      x: c.x.toFixed(1),
      y: String(HEIGHT - 4),
      class: "vf-tick",
      "text-anchor": "middle",
    });
    tick.textContent = c.key;
    svg.appendChild(tick);
  }

  wrap.appendChild(svg);
  const caption = el(
    "figcaption",
    "vf-caption",
    `${vf.kind}, unit α = ${vf.alpha.display}`,
  );
  caption.title = `exact α = ${vf.alpha.exact}`;
  wrap.appendChild(caption);
  return wrap;
}
