/**
 * Reader for the engine's annotated CSV bundles: `# key=value` metadata
 * lines, then an RFC-4180 body with a header row and '.' decimals.
 */

import Papa from "papaparse";

export interface AnnotatedCsv {
  /** key=value pairs from the leading comment lines */
  meta: Record<string, string>;
  columns: string[];
  /** raw string cells keyed by column; use num()/optionalNum() to coerce */
  rows: Record<string, string>[];
}

export class CsvFormatError extends Error {}

export function parseAnnotatedCsv(text: string, name = "csv"): AnnotatedCsv {
  const meta: Record<string, string> = {};
  const body: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.startsWith("#")) {
      const stripped = line.replace(/^#\s*/, "");
      const eq = stripped.indexOf("=");
      if (eq < 0) {
        throw new CsvFormatError(`${name}: metadata line without '=': ${line}`);
      }
      meta[stripped.slice(0, eq)] = stripped.slice(eq + 1);
    } else if (line.trim().length > 0) {
      body.push(line);
    }
  }
  if (body.length === 0) {
    throw new CsvFormatError(`${name}: no header row`);
  }
  const parsed = Papa.parse<Record<string, string>>(body.join("\n"), {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new CsvFormatError(`${name}: ${first.message} (row ${first.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new CsvFormatError(`${name}: header but no data rows`);
  }
  return { meta, columns, rows: parsed.data };
}

export function requireColumns(csv: AnnotatedCsv, wanted: string[], name = "csv"): void {
  const missing = wanted.filter((c) => !csv.columns.includes(c));
  if (missing.length > 0) {
    throw new CsvFormatError(
      `${name}: missing column(s) ${missing.join(", ")} — has ${csv.columns.join(", ")}`,
    );
  }
}

/** Numeric cell; blank or unparseable is an error. */
export function num(row: Record<string, string>, column: string): number {
  const raw = row[column];
  if (raw === undefined || raw === "") {
    throw new CsvFormatError(`blank cell in column ${column}`);
  }
  const value = Number(raw);
  if (Number.isNaN(value)) {
    throw new CsvFormatError(`cannot parse ${column}=${JSON.stringify(raw)} as a number`);
  }
  return value;
}

/** Numeric cell where blank means "absent" (e.g. the exact column past its cap). */
export function optionalNum(row: Record<string, string>, column: string): number | null {
  const raw = row[column];
  if (raw === undefined || raw === "") return null;
  return num(row, column);
}
