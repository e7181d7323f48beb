/**
 * Plot specification: the declarative middle layer between CSV bundles and
 * SVG. Tests inspect these structures (series kinds, point counts, guide
 * positions) instead of rendered pixels, and rendering is a pure function
 * of them.
 */

export interface FigureSpec {
  figure: string;
  title: string;
  /** metadata propagated from the source CSV headers */
  meta: Record<string, string>;
  panels: PanelSpec[];
}

export interface PanelSpec {
  id: string;
  title: string;
  x: AxisSpec;
  y: AxisSpec;
  series: SeriesSpec[];
}

export interface AxisSpec {
  label: string;
  min: number;
  max: number;
}

export type SeriesSpec =
  | LineSeries
  | DotSeries
  | BoxSeries
  | HeatmapSeries
  | GuideSeries;

export interface LineSeries {
  kind: "line";
  label: string;
  points: [number, number][];
  dashed?: boolean;
}

export interface DotSeries {
  kind: "dots";
  label: string;
  points: [number, number][];
}

export interface BoxGlyph {
  x: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export interface BoxSeries {
  kind: "boxes";
  label: string;
  boxes: BoxGlyph[];
}

export interface HeatmapSeries {
  kind: "heatmap";
  label: string;
  /** sorted cell-centre coordinates */
  x: number[];
  y: number[];
  /** values[yi][xi] */
  values: number[][];
}

export interface GuideSeries {
  kind: "guide";
  label: string;
  orientation: "horizontal" | "vertical";
  at: number;
  dashed: true;
}

export class SpecError extends Error {}

/** Cheap structural checks so a malformed build fails before rendering. */
export function validateSpec(spec: FigureSpec): void {
  if (spec.panels.length === 0) throw new SpecError(`${spec.figure}: no panels`);
  for (const panel of spec.panels) {
    for (const axis of [panel.x, panel.y]) {
      if (!(axis.min < axis.max)) {
        throw new SpecError(
          `${spec.figure}/${panel.id}: axis ${axis.label} has empty range`,
        );
      }
    }
    if (panel.series.length === 0) {
      throw new SpecError(`${spec.figure}/${panel.id}: no series`);
    }
    for (const series of panel.series) {
      if (series.kind === "line" || series.kind === "dots") {
        if (series.points.length === 0) {
          throw new SpecError(
            `${spec.figure}/${panel.id}/${series.label}: no points`,
          );
        }
      } else if (series.kind === "boxes") {
        for (const b of series.boxes) {
          const ordered =
            b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max;
          if (!ordered) {
            throw new SpecError(
              `${spec.figure}/${panel.id}: box at x=${b.x} is not ordered`,
            );
          }
        }
      } else if (series.kind === "heatmap") {
        if (series.values.length !== series.y.length) {
          throw new SpecError(`${spec.figure}/${panel.id}: heatmap row count`);
        }
        for (const row of series.values) {
          if (row.length !== series.x.length) {
            throw new SpecError(`${spec.figure}/${panel.id}: ragged heatmap`);
          }
        }
      }
    }
  }
}

export function seriesOfKind<K extends SeriesSpec["kind"]>(
  panel: PanelSpec,
  kind: K,
): Extract<SeriesSpec, { kind: K }>[] {
  return panel.series.filter(
    (s): s is Extract<SeriesSpec, { kind: K }> => s.kind === kind,
  );
}
