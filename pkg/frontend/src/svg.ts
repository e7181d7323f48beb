/**
 * Deterministic SVG renderer for FigureSpec. No timestamps, no randomness:
 * the same spec always yields byte-identical markup (the reproducibility
 * property the tests pin down).
 */

import {
  AxisSpec,
  BoxSeries,
  DotSeries,
  FigureSpec,
  GuideSeries,
  HeatmapSeries,
  LineSeries,
  PanelSpec,
} from "./spec.js";

export interface RenderOptions {
  panelWidth?: number;
  panelHeight?: number;
}

const MARGIN = { top: 64, right: 20, bottom: 50, left: 58 };
const PALETTE = ["#1b6ca8", "#e66a12", "#259b48", "#b0368c", "#6a4fa3", "#3b3b3b"];
const GUIDE_COLOR = "#888888";

/** linear domain -> pixel mapping (y axes pass a reversed pixel range) */
function scale(axis: AxisSpec, pxMin: number, pxMax: number) {
  const span = axis.max - axis.min;
  return (v: number) => pxMin + ((v - axis.min) / span) * (pxMax - pxMin);
}

function fmt(v: number): string {
  if (v === 0) return "0";
  return String(Number(v.toPrecision(10)));
}

/** ~count ticks on a 1/2/5 ladder, clipped to the axis range */
export function ticks(min: number, max: number, count = 5): number[] {
  const rawStep = (max - min) / count;
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const m of [1, 2, 5, 10]) {
    if (m * power >= rawStep) {
      step = m * power;
      break;
    }
  }
  const out: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + step * 1e-9; t += step) {
    out.push(Number(t.toPrecision(12)));
  }
  return out.filter((t) => t >= min - step * 1e-9 && t <= max + step * 1e-9);
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

/** blue-white-red diverging map centred on 0.5, for probability surfaces */
export function heatColor(p: number): string {
  const lerp = (a: number, b: number, t: number) => Math.round(a + (b - a) * t);
  const t = Math.max(0, Math.min(1, p));
  const [lo, mid, hi] = [
    [33, 102, 172],
    [247, 247, 247],
    [178, 24, 43],
  ] as const;
  const [from, to, u] = t < 0.5 ? [lo, mid, t * 2] : [mid, hi, (t - 0.5) * 2];
  return `rgb(${lerp(from[0], to[0], u)},${lerp(from[1], to[1], u)},${lerp(from[2], to[2], u)})`;
}

function renderLine(s: LineSeries, sx: (v: number) => number, sy: (v: number) => number, color: string): string {
  const points = s.points.map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`).join(" ");
  const dash = s.dashed ? ' stroke-dasharray="6 4"' : "";
  return `<polyline fill="none" stroke="${color}" stroke-width="1.8"${dash} points="${points}"/>`;
}

function renderDots(s: DotSeries, sx: (v: number) => number, sy: (v: number) => number, color: string): string {
  return s.points
    .map(([x, y]) => `<circle cx="${fmt(sx(x))}" cy="${fmt(sy(y))}" r="3.2" fill="${color}"/>`)
    .join("");
}

function renderBoxes(s: BoxSeries, sx: (v: number) => number, sy: (v: number) => number, color: string): string {
  const xs = s.boxes.map((b) => sx(b.x)).sort((a, b) => a - b);
  let gap = Infinity;
  for (let i = 1; i < xs.length; i++) gap = Math.min(gap, xs[i]! - xs[i - 1]!);
  const halfWidth = Number.isFinite(gap) ? Math.min(gap * 0.3, 12) : 8;
  const parts: string[] = [];
  for (const b of s.boxes) {
    const x = sx(b.x);
    const [lo, q1, med, q3, hi] = [sy(b.min), sy(b.q1), sy(b.median), sy(b.q3), sy(b.max)];
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(lo)}" x2="${fmt(x)}" y2="${fmt(hi)}" stroke="${color}" stroke-width="1"/>`,
      `<rect x="${fmt(x - halfWidth)}" y="${fmt(q3)}" width="${fmt(2 * halfWidth)}" height="${fmt(q1 - q3)}" fill="${color}" fill-opacity="0.35" stroke="${color}" stroke-width="1"/>`,
      `<line x1="${fmt(x - halfWidth)}" y1="${fmt(med)}" x2="${fmt(x + halfWidth)}" y2="${fmt(med)}" stroke="${color}" stroke-width="1.6"/>`,
    );
  }
  return parts.join("");
}

function renderHeatmap(s: HeatmapSeries, sx: (v: number) => number, sy: (v: number) => number): string {
  // cell edges at midpoints between neighbouring centres
  const edges = (centres: number[], px: (v: number) => number) => {
    const out: number[] = [];
    for (let i = 0; i <= centres.length; i++) {
      if (i === 0) out.push(px(centres[0]!) - (px(centres[1]!) - px(centres[0]!)) / 2);
      else if (i === centres.length)
        out.push(px(centres[i - 1]!) + (px(centres[i - 1]!) - px(centres[i - 2]!)) / 2);
      else out.push((px(centres[i - 1]!) + px(centres[i]!)) / 2);
    }
    return out;
  };
  const ex = edges(s.x, sx);
  const ey = edges(s.y, sy);
  const parts: string[] = [];
  for (let yi = 0; yi < s.y.length; yi++) {
    for (let xi = 0; xi < s.x.length; xi++) {
      const x0 = Math.min(ex[xi]!, ex[xi + 1]!);
      const y0 = Math.min(ey[yi]!, ey[yi + 1]!);
      const w = Math.abs(ex[xi + 1]! - ex[xi]!);
      const h = Math.abs(ey[yi + 1]! - ey[yi]!);
      parts.push(
        `<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${fmt(w)}" height="${fmt(h)}" fill="${heatColor(s.values[yi]![xi]!)}"/>`,
      );
    }
  }
  return parts.join("");
}

function renderGuide(
  s: GuideSeries,
  panel: PanelSpec,
  sx: (v: number) => number,
  sy: (v: number) => number,
): string {
  if (s.orientation === "horizontal") {
    const y = fmt(sy(s.at));
    return (
      `<line x1="${fmt(sx(panel.x.min))}" y1="${y}" x2="${fmt(sx(panel.x.max))}" y2="${y}" ` +
      `stroke="${GUIDE_COLOR}" stroke-width="1" stroke-dasharray="4 4"/>` +
      `<text x="${fmt(sx(panel.x.max) + 3)}" y="${y}" font-size="8" fill="${GUIDE_COLOR}" dominant-baseline="middle">${esc(s.label)}</text>`
    );
  }
  const x = fmt(sx(s.at));
  return (
    `<line x1="${x}" y1="${fmt(sy(panel.y.min))}" x2="${x}" y2="${fmt(sy(panel.y.max))}" ` +
    `stroke="${GUIDE_COLOR}" stroke-width="1" stroke-dasharray="4 4"/>` +
    `<text x="${x}" y="${fmt(sy(panel.y.max) - 4)}" font-size="8" fill="${GUIDE_COLOR}" text-anchor="middle">${esc(s.label)}</text>`
  );
}

function renderAxes(panel: PanelSpec, x0: number, y0: number, w: number, h: number): string {
  const sx = scale(panel.x, x0, x0 + w);
  const sy = scale(panel.y, y0 + h, y0);
  const parts: string[] = [
    `<rect x="${x0}" y="${y0}" width="${w}" height="${h}" fill="none" stroke="#333" stroke-width="1"/>`,
  ];
  for (const t of ticks(panel.x.min, panel.x.max)) {
    const px = fmt(sx(t));
    parts.push(
      `<line x1="${px}" y1="${fmt(y0 + h)}" x2="${px}" y2="${fmt(y0 + h + 4)}" stroke="#333" stroke-width="1"/>`,
      `<text x="${px}" y="${fmt(y0 + h + 15)}" font-size="9" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(panel.y.min, panel.y.max)) {
    const py = fmt(sy(t));
    parts.push(
      `<line x1="${fmt(x0 - 4)}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333" stroke-width="1"/>`,
      `<text x="${fmt(x0 - 7)}" y="${py}" font-size="9" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${fmt(x0 + w / 2)}" y="${fmt(y0 + h + 32)}" font-size="10" text-anchor="middle">${esc(panel.x.label)}</text>`,
    `<text x="${fmt(x0 - 40)}" y="${fmt(y0 + h / 2)}" font-size="10" text-anchor="middle" transform="rotate(-90 ${fmt(x0 - 40)} ${fmt(y0 + h / 2)})">${esc(panel.y.label)}</text>`,
  );
  return parts.join("");
}

function renderLegend(panel: PanelSpec, x0: number, y0: number): string {
  const parts: string[] = [];
  let row = 0;
  let colorIdx = 0;
  for (const s of panel.series) {
    if (s.kind === "heatmap") continue; // surface needs no swatch
    const color = s.kind === "guide" ? GUIDE_COLOR : PALETTE[colorIdx++ % PALETTE.length]!;
    if (s.kind === "guide" && row >= 4) continue; // cap long guide lists
    const y = y0 + 10 + row * 11;
    const dash = s.kind === "guide" || (s.kind === "line" && s.dashed) ? ' stroke-dasharray="4 3"' : "";
    if (s.kind === "dots") {
      parts.push(`<circle cx="${x0 + 8}" cy="${y - 3}" r="3" fill="${color}"/>`);
    } else {
      parts.push(
        `<line x1="${x0}" y1="${y - 3}" x2="${x0 + 16}" y2="${y - 3}" stroke="${color}" stroke-width="2"${dash}/>`,
      );
    }
    parts.push(`<text x="${x0 + 20}" y="${y}" font-size="9">${esc(s.label)}</text>`);
    row++;
  }
  return parts.join("");
}

export function renderFigure(spec: FigureSpec, options: RenderOptions = {}): string {
  const pw = options.panelWidth ?? 330;
  const ph = options.panelHeight ?? 290;
  const panelStride = MARGIN.left + pw + MARGIN.right;
  const width = panelStride * spec.panels.length;
  const height = MARGIN.top + ph + MARGIN.bottom;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${fmt(width / 2)}" y="20" font-size="13" text-anchor="middle" font-weight="bold">${esc(spec.title)}</text>`,
  ];

  spec.panels.forEach((panel, idx) => {
    const x0 = idx * panelStride + MARGIN.left;
    const y0 = MARGIN.top;
    const sx = scale(panel.x, x0, x0 + pw);
    const sy = scale(panel.y, y0 + ph, y0);
    parts.push(`<g data-panel="${esc(panel.id)}">`);
    parts.push(
      `<text x="${fmt(x0 + pw / 2)}" y="${fmt(y0 - 10)}" font-size="11" text-anchor="middle">${esc(panel.title)}</text>`,
    );
    let colorIdx = 0;
    for (const s of panel.series) {
      if (s.kind === "heatmap") {
        parts.push(renderHeatmap(s, sx, sy));
      } else if (s.kind === "guide") {
        parts.push(renderGuide(s, panel, sx, sy));
      } else {
        const color = PALETTE[colorIdx++ % PALETTE.length]!;
        if (s.kind === "line") parts.push(renderLine(s, sx, sy, color));
        else if (s.kind === "dots") parts.push(renderDots(s, sx, sy, color));
        else parts.push(renderBoxes(s, sx, sy, color));
      }
    }
    parts.push(renderAxes(panel, x0, y0, pw, ph));
    parts.push(renderLegend(panel, x0 + 6, y0 + 4));
    parts.push("</g>");
  });

  parts.push("</svg>");
  return parts.join("\n");
}
