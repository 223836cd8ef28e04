// Chart rendering from declarative specs. Values are plotted exactly as
// received; the client never computes or rescales the numbers shown in
// tooltips and value labels. An unknown chart type renders a visible
// placeholder instead of failing the whole answer view.

import type { ChartSpec } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 560;
const HEIGHT = 320;
const MARGIN = 40;
const COLORS = ["#4063d8", "#389826", "#cb3c33", "#9558b2", "#e69f00", "#56b4e9"];

const KNOWN_TYPES = new Set(["bar", "grouped_bar", "line", "pie"]);

function svgel<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function withTitle<T extends SVGElement>(el: T, text: string): T {
  const title = svgel("title");
  title.textContent = text;
  el.appendChild(title);
  return el;
}

export function renderChart(spec: ChartSpec): HTMLElement {
  const wrapper = document.createElement("figure");
  wrapper.className = "chart";
  if (!KNOWN_TYPES.has(spec.chart_type)) {
    const placeholder = document.createElement("div");
    placeholder.className = "chart-placeholder";
    placeholder.textContent = `Unsupported chart type "${spec.chart_type}" — showing data as text is available in the answer above.`;
    wrapper.appendChild(placeholder);
    return wrapper;
  }

  const svg = svgel("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: WIDTH,
    height: HEIGHT,
    role: "img",
  });
  const caption = document.createElement("figcaption");
  caption.textContent = spec.title;
  wrapper.appendChild(caption);

  if (spec.chart_type === "pie") {
    renderPie(svg, spec);
  } else if (spec.chart_type === "line") {
    renderLine(svg, spec);
  } else {
    renderBars(svg, spec, spec.chart_type === "grouped_bar");
  }
  wrapper.appendChild(svg);
  return wrapper;
}

function valueRange(spec: ChartSpec): [number, number] {
  const values = spec.series.flatMap((s) => s.values);
  const lo = Math.min(0, ...values);
  let hi = Math.max(...values);
  if (hi === lo) hi = lo + 1;
  return [lo, hi];
}

function renderBars(svg: SVGSVGElement, spec: ChartSpec, grouped: boolean): void {
  const [lo, hi] = valueRange(spec);
  const plotW = WIDTH - 2 * MARGIN;
  const plotH = HEIGHT - 2 * MARGIN;
  const nCat = spec.x.categories.length;
  const series = grouped ? spec.series : spec.series.slice(0, 1);
  const slot = plotW / nCat;
  const barW = (slot * 0.8) / series.length;

  svg.appendChild(
    svgel("line", {
      x1: MARGIN,
      y1: HEIGHT - MARGIN,
      x2: WIDTH - MARGIN,
      y2: HEIGHT - MARGIN,
      stroke: "#333",
    }),
  );
  spec.x.categories.forEach((category, ci) => {
    const label = svgel("text", {
      x: MARGIN + slot * ci + slot / 2,
      y: HEIGHT - MARGIN + 16,
      "text-anchor": "middle",
      "font-size": 10,
    });
    label.textContent = category;
    svg.appendChild(label);
  });
  series.forEach((s, si) => {
    s.values.forEach((value, ci) => {
      const frac = (value - lo) / (hi - lo);
      const barH = frac * plotH;
      const rect = svgel("rect", {
        x: MARGIN + slot * ci + slot * 0.1 + si * barW,
        y: HEIGHT - MARGIN - barH,
        width: barW,
        height: barH,
        fill: COLORS[si % COLORS.length]!,
        class: "chart-bar",
      });
      svg.appendChild(withTitle(rect, `${s.label} — ${spec.x.categories[ci]}: ${value}`));
    });
  });
}

function renderLine(svg: SVGSVGElement, spec: ChartSpec): void {
  const [lo, hi] = valueRange(spec);
  const plotW = WIDTH - 2 * MARGIN;
  const plotH = HEIGHT - 2 * MARGIN;
  const nCat = spec.x.categories.length;
  svg.appendChild(
    svgel("line", {
      x1: MARGIN,
      y1: HEIGHT - MARGIN,
      x2: WIDTH - MARGIN,
      y2: HEIGHT - MARGIN,
      stroke: "#333",
    }),
  );
  spec.series.forEach((s, si) => {
    const points = s.values
      .map((value, ci) => {
        const x = MARGIN + (plotW * ci) / Math.max(nCat - 1, 1);
        const y = HEIGHT - MARGIN - ((value - lo) / (hi - lo)) * plotH;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
    const line = svgel("polyline", {
      points,
      fill: "none",
      stroke: COLORS[si % COLORS.length]!,
      "stroke-width": 2,
      class: "chart-line",
    });
    svg.appendChild(withTitle(line, s.label));
  });
}

function renderPie(svg: SVGSVGElement, spec: ChartSpec): void {
  const series = spec.series[0];
  if (!series) return;
  const total = series.values.reduce((a, b) => a + b, 0) || 1;
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2;
  const radius = Math.min(WIDTH, HEIGHT) / 3;
  let angle = -Math.PI / 2;
  series.values.forEach((value, i) => {
    const sweep = (value / total) * 2 * Math.PI;
    const x0 = cx + radius * Math.cos(angle);
    const y0 = cy + radius * Math.sin(angle);
    angle += sweep;
    const x1 = cx + radius * Math.cos(angle);
    const y1 = cy + radius * Math.sin(angle);
    const large = sweep > Math.PI ? 1 : 0;
    const path = svgel("path", {
      d: `M${cx},${cy} L${x0.toFixed(1)},${y0.toFixed(1)} A${radius},${radius} 0 ${large} 1 ${x1.toFixed(1)},${y1.toFixed(1)} Z`,
      fill: COLORS[i % COLORS.length]!,
      class: "chart-slice",
    });
    svg.appendChild(withTitle(path, `${spec.x.categories[i] ?? i}: ${value}`));
  });
}
