#!/usr/bin/env node
/**
 * make-figures --in <dir> --out <dir>
 *
 * Renders one deterministic SVG per recognized experiment report
 * (<experiment>.csv) found in --in.  Exit 0 on success (including empty
 * reports, which render as empty axes with a warning); exit 1 on schema
 * violations — a missing column is reported by name — or I/O failures.
 */

import * as fs from "fs";
import * as path from "path";
import yargs from "yargs";

import { KNOWN_EXPERIMENTS, MalformedRowError, MissingColumnError } from "./csv";
import { figureSpecFor, render } from "./render";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("in", {
      type: "string",
      demandOption: true,
      describe: "directory holding <experiment>.csv reports",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "directory to write <experiment>.svg figures into",
    })
    .strict()
    .exitProcess(false)
    .parseSync();

  const inDir = args.in;
  const outDir = args.out;
  if (!fs.existsSync(inDir) || !fs.statSync(inDir).isDirectory()) {
    console.error(`error: input directory not found: ${inDir}`);
    return 1;
  }
  const csvs = fs
    .readdirSync(inDir)
    .filter((f) => f.endsWith(".csv"))
    .sort();
  const recognized = csvs.filter((f) =>
    (KNOWN_EXPERIMENTS as readonly string[]).includes(path.basename(f, ".csv")),
  );
  for (const f of csvs) {
    if (!recognized.includes(f)) {
      console.warn(`warning: skipping unrecognized report ${f}`);
    }
  }
  if (recognized.length === 0) {
    console.warn(`warning: no experiment reports found in ${inDir}`);
    return 0;
  }
  fs.mkdirSync(outDir, { recursive: true });

  for (const f of recognized) {
    const experiment = path.basename(f, ".csv");
    try {
      const spec = figureSpecFor(experiment, path.join(inDir, f), outDir);
      const result = render(spec);
      if (result.rowCount === 0) {
        console.warn(`warning: ${f} has no data rows; rendered empty axes`);
      }
      console.log(`wrote ${result.output} (${result.rowCount} rows)`);
    } catch (err) {
      if (err instanceof MissingColumnError || err instanceof MalformedRowError) {
        console.error(`error: ${err.message}`);
      } else {
        console.error(`error: ${f}: ${(err as Error).message}`);
      }
      return 1;
    }
  }
  return 0;
}

/* istanbul ignore next */
if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
