/**
 * Figure builders: pure functions from parsed CSV bundles to FigureSpec.
 * No model quantity is computed here — every number is read from the files
 * (guides come from metadata keys or parameter columns).
 */

import {
  AnnotatedCsv,
  CsvFormatError,
  num,
  optionalNum,
  requireColumns,
} from "./csv.js";
import {
  BoxGlyph,
  FigureSpec,
  GuideSeries,
  LineSeries,
  PanelSpec,
  validateSpec,
} from "./spec.js";

/** "2.50" -> "2.5", "1.0" -> "1" — for legend labels built from raw cells. */
function trimNumber(raw: string): string {
  return String(Number(raw));
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

/** Distinct raw cell values of one column: numeric order when every value
 * parses as a number, lexicographic otherwise. */
function distinct(csv: AnnotatedCsv, column: string): string[] {
  const seen = new Set<string>();
  for (const row of csv.rows) {
    const raw = row[column];
    if (raw !== undefined && raw !== "") seen.add(raw);
  }
  const values = [...seen];
  if (values.every((v) => !Number.isNaN(Number(v)))) {
    return values.sort((a, b) => Number(a) - Number(b));
  }
  return values.sort();
}

const P_AXIS = { label: "cooperation probability", min: 0, max: 1 };

// ------------------------------------------------------------------ fig1 --

export function buildFig1(csv: AnnotatedCsv): FigureSpec {
  requireColumns(
    csv,
    ["panel", "n", "p_closed", "p_exact", "sim_mean", "sim_q1", "sim_median",
     "sim_q3", "sim_min", "sim_max"],
    "fig1",
  );
  const panels: PanelSpec[] = [];
  for (const key of distinct(csv, "panel")) {
    const rows = csv.rows
      .filter((r) => r.panel === key)
      .sort((a, b) => num(a, "n") - num(b, "n"));
    const line: LineSeries = {
      kind: "line",
      label: "closed form",
      points: rows.map((r) => [num(r, "n"), num(r, "p_closed")]),
    };
    const dots = {
      kind: "dots" as const,
      label: "exact",
      points: [] as [number, number][],
    };
    for (const r of rows) {
      const exact = optionalNum(r, "p_exact");
      if (exact !== null) dots.points.push([num(r, "n"), exact]);
    }
    const boxes: BoxGlyph[] = rows.map((r) => ({
      x: num(r, "n"),
      min: num(r, "sim_min"),
      q1: num(r, "sim_q1"),
      median: num(r, "sim_median"),
      q3: num(r, "sim_q3"),
      max: num(r, "sim_max"),
    }));
    const [nLo, nHi] = extent(line.points.map((p) => p[0]));
    panels.push({
      id: key === "r=2N" ? "enhanced" : "diminished",
      title: key.replace("r=", "r = "),
      x: { label: "group size N", min: nLo, max: nHi },
      y: { ...P_AXIS },
      series: [
        line,
        dots,
        { kind: "boxes", label: "simulation replicates", boxes },
      ],
    });
  }
  const spec: FigureSpec = {
    figure: "fig1",
    title: "Cooperation vs group size",
    meta: csv.meta,
    panels,
  };
  validateSpec(spec);
  return spec;
}

// ------------------------------------------------------------------ fig2 --

function lineFamily(
  csv: AnnotatedCsv,
  groupBy: string[],
  xColumn: string,
): LineSeries[] {
  const series: LineSeries[] = [];
  const keys = new Map<string, Record<string, string>[]>();
  for (const row of csv.rows) {
    const key = groupBy.map((c) => row[c]).join("|");
    if (!keys.has(key)) keys.set(key, []);
    keys.get(key)!.push(row);
  }
  const ordered = [...keys.entries()].sort(([a], [b]) => {
    const pa = a.split("|").map(Number);
    const pb = b.split("|").map(Number);
    for (let i = 0; i < pa.length; i++) {
      if (pa[i]! !== pb[i]!) return pa[i]! - pb[i]!;
    }
    return 0;
  });
  for (const [key, rows] of ordered) {
    const parts = key.split("|");
    rows.sort((a, b) => num(a, xColumn) - num(b, xColumn));
    series.push({
      kind: "line",
      label: groupBy
        .map((c, i) => `${c}=${trimNumber(parts[i]!)}`)
        .join(", "),
      points: rows.map((r) => [num(r, xColumn), num(r, "p")]),
    });
  }
  return series;
}

export function buildFig2(
  left: AnnotatedCsv,
  centre: AnnotatedCsv,
  right: AnnotatedCsv,
): FigureSpec {
  requireColumns(left, ["r", "beta", "p"], "fig2_left");
  requireColumns(centre, ["r", "beta", "alpha", "p"], "fig2_centre");
  requireColumns(right, ["alpha", "r", "p"], "fig2_right");

  const neutral: GuideSeries = {
    kind: "guide",
    label: "p = 1/2",
    orientation: "horizontal",
    at: 0.5,
    dashed: true,
  };

  const betas = distinct(left, "beta").map(Number);
  const leftPanel: PanelSpec = {
    id: "vs-beta",
    title: "vs selection strength",
    x: { label: "selection strength beta", ...range(extent(betas)) },
    y: { ...P_AXIS },
    series: [...lineFamily(left, ["r"], "beta"), neutral],
  };

  const alphas = distinct(centre, "alpha").map(Number);
  const centrePanel: PanelSpec = {
    id: "vs-alpha",
    title: "vs stake",
    x: { label: "stake alpha", ...range(extent(alphas)) },
    y: { ...P_AXIS },
    series: [...lineFamily(centre, ["r", "beta"], "alpha"), { ...neutral }],
  };

  const gridX = distinct(right, "alpha").map(Number);
  const gridY = distinct(right, "r").map(Number);
  const lookup = new Map<string, number>();
  for (const row of right.rows) {
    lookup.set(`${Number(row.alpha)}|${Number(row.r)}`, num(row, "p"));
  }
  const values = gridY.map((r) =>
    gridX.map((a) => {
      const p = lookup.get(`${a}|${r}`);
      if (p === undefined) {
        throw new CsvFormatError(`fig2_right: no cell at alpha=${a}, r=${r}`);
      }
      return p;
    }),
  );
  // the multiplier level at which cooperation turns favourable, as recorded
  // by the producer
  const guideAt = Number(right.meta.guide_r_equals_n ?? right.meta.n);
  if (Number.isNaN(guideAt)) {
    throw new CsvFormatError("fig2_right: missing guide_r_equals_n metadata");
  }
  const rightPanel: PanelSpec = {
    id: "surface",
    title: "no-selection surface",
    x: { label: "stake alpha", ...range(extent(gridX)) },
    y: { label: "multiplier r", ...range(extent(gridY)) },
    series: [
      { kind: "heatmap", label: "p at beta=0", x: gridX, y: gridY, values },
      {
        kind: "guide",
        label: "r = N",
        orientation: "horizontal",
        at: guideAt,
        dashed: true,
      },
    ],
  };

  const spec: FigureSpec = {
    figure: "fig2",
    title: "Single-player response",
    meta: left.meta,
    panels: [leftPanel, centrePanel, rightPanel],
  };
  validateSpec(spec);
  return spec;
}

function range([min, max]: [number, number]): { min: number; max: number } {
  return { min, max };
}

// ------------------------------------------------------------------ fig3 --

export function buildFig3(csv: AnnotatedCsv): FigureSpec {
  requireColumns(csv, ["n", "mu", "beta", "p"], "fig3");
  const mus = distinct(csv, "mu");
  const panels: PanelSpec[] = [];
  for (const nRaw of distinct(csv, "n")) {
    const sub: AnnotatedCsv = {
      meta: csv.meta,
      columns: csv.columns,
      rows: csv.rows.filter((r) => r.n === nRaw),
    };
    const lines = lineFamily(sub, ["mu"], "beta");
    const betas = distinct(sub, "beta").map(Number);
    // mutation bounds mu <= p <= 1-mu: the asymptotes every curve runs into
    const guides: GuideSeries[] = mus.flatMap((muRaw) => {
      const mu = Number(muRaw);
      return [
        {
          kind: "guide" as const,
          label: `mu=${trimNumber(muRaw)}`,
          orientation: "horizontal" as const,
          at: mu,
          dashed: true as const,
        },
        {
          kind: "guide" as const,
          label: `1-mu=${trimNumber(String(1 - mu))}`,
          orientation: "horizontal" as const,
          at: 1 - mu,
          dashed: true as const,
        },
      ];
    });
    const n = trimNumber(nRaw);
    panels.push({
      id: `group-${n}`,
      title: `N = ${n}`,
      x: { label: "selection strength beta", ...range(extent(betas)) },
      y: { ...P_AXIS },
      series: [...lines, ...guides],
    });
  }
  const spec: FigureSpec = {
    figure: "fig3",
    title: "Mutation pull at two group sizes",
    meta: csv.meta,
    panels,
  };
  validateSpec(spec);
  return spec;
}
