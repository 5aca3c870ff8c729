/**
 * FigureSpec and the render operation: one spec in, one image file out.
 */

import * as fs from "fs";
import * as path from "path";

import { parseResultsCsv, ResultRow } from "./csv";
import { buildFigure, FIGURE_KINDS, FigureKind } from "./figures";

export interface FigureSpec {
  /** Input CSV report paths (concatenated in order). */
  inputs: string[];
  /** Which experiment's builder interprets the rows. */
  experiment: string;
  kind: FigureKind;
  xScale: "linear" | "log";
  yScale: "linear" | "log";
  /** Output image path (.svg). */
  output: string;
}

/** The canonical spec for one experiment report file. */
export function figureSpecFor(experiment: string, csvPath: string, outDir: string): FigureSpec {
  const kind = FIGURE_KINDS[experiment];
  if (kind === undefined) {
    throw new Error(`no figure kind registered for experiment "${experiment}"`);
  }
  const log = kind === "scatter-fit";
  return {
    inputs: [csvPath],
    experiment,
    kind,
    xScale: log ? "log" : "linear",
    yScale: log ? "log" : "linear",
    output: path.join(outDir, `${experiment}.svg`),
  };
}

export interface RenderResult {
  output: string;
  rowCount: number;
}

/**
 * Read and validate the FigureSpec's inputs, build the figure, write the image.
 *
 * Throws MissingColumnError (named column) when a report lacks a schema
 * column, and plain errors for unreadable inputs or an unwritable output
 * directory.  An input with zero data rows renders as empty axes.
 */
export function render(spec: FigureSpec): RenderResult {
  const rows: ResultRow[] = [];
  for (const input of spec.inputs) {
    const text = fs.readFileSync(input, "utf8");
    rows.push(...parseResultsCsv(text, path.basename(input)));
  }
  const outDir = path.dirname(spec.output);
  fs.accessSync(outDir, fs.constants.W_OK);
  const svg = buildFigure(spec.experiment, rows);
  fs.writeFileSync(spec.output, svg, "utf8");
  return { output: spec.output, rowCount: rows.length };
}
