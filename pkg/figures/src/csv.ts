/**
 * Reader for the experiment report schema.
 *
 * Every report is a CSV with the fixed header
 *   experiment,param_json,value_name,value,drift_pct,fit_exponent,fit_halfwidth,pass
 * where `value` and `drift_pct` are float reprs, the fit columns are float
 * reprs or empty, `param_json` is a compact JSON object, and `pass` is
 * "true"/"false".
 */

import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "experiment",
  "param_json",
  "value_name",
  "value",
  "drift_pct",
  "fit_exponent",
  "fit_halfwidth",
  "pass",
] as const;

export const KNOWN_EXPERIMENTS = [
  "strichartz",
  "wellposed",
  "illposed-chirp",
  "homogeneous",
  "strichartz-reg",
  "tmax-scan",
] as const;

export interface ResultRow {
  experiment: string;
  params: Record<string, unknown>;
  valueName: string;
  value: number;
  driftPct: number;
  fitExponent: number | null;
  fitHalfwidth: number | null;
  pass: boolean;
}

/** Raised when a report lacks one of the schema columns. */
export class MissingColumnError extends Error {
  readonly column: string;
  readonly file: string;

  constructor(column: string, file: string) {
    super(`missing required column "${column}" in ${file}`);
    this.name = "MissingColumnError";
    this.column = column;
    this.file = file;
  }
}

export class MalformedRowError extends Error {
  constructor(file: string, line: number, detail: string) {
    super(`malformed row ${line} in ${file}: ${detail}`);
    this.name = "MalformedRowError";
  }
}

/** Parse a float repr; accepts "inf"/"-inf"/"nan" spellings. */
function parseFloatRepr(text: string): number {
  const t = text.trim();
  if (t === "inf" || t === "Infinity") return Infinity;
  if (t === "-inf" || t === "-Infinity") return -Infinity;
  if (t === "nan" || t === "-nan") return NaN;
  const v = Number(t);
  if (t === "" || Number.isNaN(v)) {
    throw new Error(`not a float repr: "${text}"`);
  }
  return v;
}

/**
 * Parse one report file's text.  The header must contain every schema
 * column (extras are ignored); a file with no content at all parses to
 * zero rows, representing the degenerate empty report.
 */
export function parseResultsCsv(text: string, file: string): ResultRow[] {
  if (text.trim() === "") {
    return [];
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new MissingColumnError(column, file);
    }
  }
  const rows: ResultRow[] = [];
  parsed.data.forEach((raw, i) => {
    const line = i + 2; // 1-based, after the header
    try {
      let params: Record<string, unknown>;
      try {
        params = JSON.parse(raw.param_json);
      } catch {
        throw new Error(`param_json is not valid JSON: ${raw.param_json}`);
      }
      if (typeof params !== "object" || params === null || Array.isArray(params)) {
        throw new Error("param_json must be a JSON object");
      }
      const pass = raw.pass === "true" ? true : raw.pass === "false" ? false : null;
      if (pass === null) {
        throw new Error(`pass must be "true" or "false", got "${raw.pass}"`);
      }
      rows.push({
        experiment: raw.experiment,
        params,
        valueName: raw.value_name,
        value: parseFloatRepr(raw.value),
        driftPct: parseFloatRepr(raw.drift_pct),
        fitExponent: raw.fit_exponent === "" ? null : parseFloatRepr(raw.fit_exponent),
        fitHalfwidth: raw.fit_halfwidth === "" ? null : parseFloatRepr(raw.fit_halfwidth),
        pass,
      });
    } catch (err) {
      throw new MalformedRowError(file, line, (err as Error).message);
    }
  });
  return rows;
}

/** Rows with a given value_name, in file order. */
export function rowsNamed(rows: ResultRow[], name: string): ResultRow[] {
  return rows.filter((r) => r.valueName === name);
}

/** Numeric param lookup with a clear failure mode. */
export function numParam(row: ResultRow, key: string): number {
  const v = row.params[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new Error(`row param "${key}" is not a finite number`);
  }
  return v;
}
