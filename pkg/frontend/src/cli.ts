/**
 * Batch entry point:
 *
 *   node dist/cli.js <fig1|fig2|fig3|all> --csv-dir DIR [--out-dir DIR]
 *
 * Reads the engine's CSV bundles from --csv-dir and writes <name>.svg plus
 * <name>.spec.json into --out-dir (default: the CSV directory).
 */

import { parseArgs } from "node:util";

import { FIGURE_NAMES, FigureName, render } from "./render.js";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        "csv-dir": { type: "string" },
        "out-dir": { type: "string" },
      },
    });
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  const name = parsed.positionals[0];
  const csvDir = parsed.values["csv-dir"];
  if (!name || !csvDir) {
    console.error(
      "usage: cli.js <fig1|fig2|fig3|all> --csv-dir DIR [--out-dir DIR]",
    );
    return 2;
  }
  const outDir = parsed.values["out-dir"] ?? csvDir;

  const wanted: FigureName[] =
    name === "all"
      ? [...FIGURE_NAMES]
      : FIGURE_NAMES.includes(name as FigureName)
        ? [name as FigureName]
        : [];
  if (wanted.length === 0) {
    console.error(`unknown figure ${JSON.stringify(name)}; expected fig1, fig2, fig3 or all`);
    return 2;
  }

  for (const figure of wanted) {
    try {
      const paths = render(figure, csvDir, outDir);
      console.log(paths.svg);
      console.log(paths.spec);
    } catch (err) {
      console.error(`${figure}: ${(err as Error).message}`);
      return 1;
    }
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
