/**
 * Orchestration: figure name + CSV directory in, SVG file (plus the plot
 * spec as JSON, which is what the tests assert against) out.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { join } from "node:path";

import { AnnotatedCsv, parseAnnotatedCsv } from "./csv.js";
import { buildFig1, buildFig2, buildFig3 } from "./figures.js";
import { FigureSpec } from "./spec.js";
import { renderFigure } from "./svg.js";

export const FIGURE_NAMES = ["fig1", "fig2", "fig3"] as const;
export type FigureName = (typeof FIGURE_NAMES)[number];

function readCsv(csvDir: string, file: string): AnnotatedCsv {
  const path = join(csvDir, file);
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseAnnotatedCsv(text, file);
}

export function buildSpec(name: FigureName, csvDir: string): FigureSpec {
  switch (name) {
    case "fig1":
      return buildFig1(readCsv(csvDir, "fig1.csv"));
    case "fig2":
      return buildFig2(
        readCsv(csvDir, "fig2_left.csv"),
        readCsv(csvDir, "fig2_centre.csv"),
        readCsv(csvDir, "fig2_right.csv"),
      );
    case "fig3":
      return buildFig3(readCsv(csvDir, "fig3.csv"));
  }
}

export interface RenderedPaths {
  svg: string;
  spec: string;
}

/** Render one figure bundle; returns the paths written. */
export function render(name: FigureName, csvDir: string, outDir: string): RenderedPaths {
  const spec = buildSpec(name, csvDir);
  mkdirSync(outDir, { recursive: true });
  const paths = {
    svg: join(outDir, `${name}.svg`),
    spec: join(outDir, `${name}.spec.json`),
  };
  writeFileSync(paths.svg, renderFigure(spec));
  writeFileSync(paths.spec, JSON.stringify(spec, null, 2) + "\n");
  return paths;
}
