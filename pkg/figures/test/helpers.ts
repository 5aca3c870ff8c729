import Papa from "papaparse";

/** Remove one column from a schema CSV (quote-aware via papaparse). */
export function dropColumn(text: string, column: string): string {
  const parsed = Papa.parse<string[]>(text.trim(), { header: false });
  const rows = parsed.data as string[][];
  const idx = rows[0].indexOf(column);
  if (idx < 0) throw new Error(`no column ${column}`);
  const out = rows.map((r) => r.filter((_, i) => i !== idx));
  return Papa.unparse(out, { newline: "\n" }) + "\n";
}
