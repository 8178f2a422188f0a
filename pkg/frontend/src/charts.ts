// Hand-rolled SVG charts: vertical bars, horizontal bars, pie. No chart
// library, no animation, muted palette; every element is clickable for
// drill-down.

const SVG_NS = "http://www.w3.org/2000/svg";

export const MUTED_PALETTE = [
  "#7b92aa",
  "#a3b18a",
  "#b08ea2",
  "#c9ada7",
  "#8d99ae",
  "#9a8c98",
  "#a5a58d",
  "#adb5bd",
];

// Contractual darkness ordering for severity indicators: infant darkest,
// then decreasing severity; anything unknown gets the lightest tone.
export const SEVERITY_ORDER = ["infant", "sexual_assault", "very_young", "under_10", "production"];
export const SEVERITY_COLORS: Record<string, string> = {
  infant: "#4a0806",
  sexual_assault: "#7a1614",
  very_young: "#a03a36",
  under_10: "#c26b66",
  production: "#dd9d98",
};
export const SEVERITY_LIGHTEST = "#f0d4d1";

export function severityColor(name: string): string {
  return SEVERITY_COLORS[name] ?? SEVERITY_LIGHTEST;
}

export interface ChartDatum {
  key: string;
  label: string;
  value: number;
  color?: string;
}

export interface ChartOptions {
  onClick?: (datum: ChartDatum) => void;
  width?: number;
  height?: number;
}

function svgElement(tag: string): SVGElement {
  return document.createElementNS(SVG_NS, tag) as SVGElement;
}

function attachClick(el: SVGElement, datum: ChartDatum, onClick?: (d: ChartDatum) => void) {
  if (!onClick) return;
  el.classList.add("clickable");
  el.addEventListener("click", () => onClick(datum));
}

export function barChart(data: ChartDatum[], options: ChartOptions = {}): SVGElement {
  const width = options.width ?? 640;
  const height = options.height ?? 300;
  const svg = svgElement("svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("role", "img");
  const max = Math.max(1, ...data.map((d) => d.value));
  const plotHeight = height - 60;
  const slot = width / Math.max(1, data.length);
  const barWidth = Math.min(72, slot * 0.7);

  data.forEach((datum, i) => {
    const barHeight = (datum.value / max) * (plotHeight - 10);
    const x = i * slot + (slot - barWidth) / 2;
    const y = plotHeight - barHeight;

    const bar = svgElement("rect");
    bar.setAttribute("x", String(x));
    bar.setAttribute("y", String(y));
    bar.setAttribute("width", String(barWidth));
    bar.setAttribute("height", String(Math.max(1, barHeight)));
    bar.setAttribute("fill", datum.color ?? MUTED_PALETTE[i % MUTED_PALETTE.length]);
    bar.setAttribute("data-key", datum.key);
    bar.setAttribute("data-role", "bar");
    attachClick(bar, datum, options.onClick);
    svg.appendChild(bar);

    const value = svgElement("text");
    value.setAttribute("x", String(x + barWidth / 2));
    value.setAttribute("y", String(y - 6));
    value.setAttribute("text-anchor", "middle");
    value.setAttribute("class", "chart-value");
    value.textContent = String(datum.value);
    svg.appendChild(value);

    const label = svgElement("text");
    label.setAttribute("x", String(x + barWidth / 2));
    label.setAttribute("y", String(plotHeight + 18));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "chart-label");
    label.textContent = datum.label;
    svg.appendChild(label);
  });
  return svg;
}

export function horizontalBarChart(data: ChartDatum[], options: ChartOptions = {}): SVGElement {
  const width = options.width ?? 640;
  const rowHeight = 34;
  const height = options.height ?? Math.max(rowHeight * data.length + 10, 50);
  const svg = svgElement("svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  const max = Math.max(1, ...data.map((d) => d.value));
  const labelWidth = 150;

  data.forEach((datum, i) => {
    const y = i * rowHeight + 6;
    const barLength = (datum.value / max) * (width - labelWidth - 60);

    const label = svgElement("text");
    label.setAttribute("x", String(labelWidth - 8));
    label.setAttribute("y", String(y + 16));
    label.setAttribute("text-anchor", "end");
    label.setAttribute("class", "chart-label");
    label.textContent = datum.label;
    svg.appendChild(label);

    const bar = svgElement("rect");
    bar.setAttribute("x", String(labelWidth));
    bar.setAttribute("y", String(y));
    bar.setAttribute("width", String(Math.max(1, barLength)));
    bar.setAttribute("height", "22");
    bar.setAttribute("fill", datum.color ?? MUTED_PALETTE[i % MUTED_PALETTE.length]);
    bar.setAttribute("data-key", datum.key);
    bar.setAttribute("data-role", "bar");
    attachClick(bar, datum, options.onClick);
    svg.appendChild(bar);

    const value = svgElement("text");
    value.setAttribute("x", String(labelWidth + Math.max(1, barLength) + 6));
    value.setAttribute("y", String(y + 16));
    value.setAttribute("class", "chart-value");
    value.textContent = String(datum.value);
    svg.appendChild(value);
  });
  return svg;
}

export function pieChart(data: ChartDatum[], options: ChartOptions = {}): SVGElement {
  const size = options.width ?? 280;
  const radius = size / 2 - 10;
  const cx = size / 2;
  const cy = size / 2;
  const svg = svgElement("svg");
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  const total = data.reduce((sum, d) => sum + d.value, 0);
  if (total === 0) return svg;

  let angle = -Math.PI / 2;
  data.forEach((datum, i) => {
    const sweep = (datum.value / total) * Math.PI * 2;
    const x1 = cx + radius * Math.cos(angle);
    const y1 = cy + radius * Math.sin(angle);
    const x2 = cx + radius * Math.cos(angle + sweep);
    const y2 = cy + radius * Math.sin(angle + sweep);
    const largeArc = sweep > Math.PI ? 1 : 0;

    const slice = svgElement("path");
    if (data.length === 1 || sweep >= Math.PI * 2 - 1e-9) {
      // full circle
      slice.setAttribute(
        "d",
        `M ${cx - radius} ${cy} A ${radius} ${radius} 0 1 1 ${cx + radius} ${cy} A ${radius} ${radius} 0 1 1 ${cx - radius} ${cy} Z`,
      );
    } else {
      slice.setAttribute(
        "d",
        `M ${cx} ${cy} L ${x1} ${y1} A ${radius} ${radius} 0 ${largeArc} 1 ${x2} ${y2} Z`,
      );
    }
    slice.setAttribute("fill", datum.color ?? MUTED_PALETTE[i % MUTED_PALETTE.length]);
    slice.setAttribute("data-key", datum.key);
    slice.setAttribute("data-role", "slice");
    attachClick(slice, datum, options.onClick);
    svg.appendChild(slice);
    angle += sweep;
  });
  return svg;
}
