import * as fs from "fs";
import * as path from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";

import {
  MalformedRowError,
  MissingColumnError,
  parseResultsCsv,
  REQUIRED_COLUMNS,
  rowsNamed,
} from "../src/csv";
import { dropColumn } from "./helpers";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURES = path.join(HERE, "fixtures");

function fixtureText(name: string): string {
  return fs.readFileSync(path.join(FIXTURES, name), "utf8");
}

describe("parseResultsCsv", () => {
  it("parses a real report with typed fields", () => {
    const rows = parseResultsCsv(fixtureText("strichartz.csv"), "strichartz.csv");
    expect(rows.length).toBeGreaterThan(5);
    for (const r of rows) {
      expect(r.experiment).toBe("strichartz");
      expect(typeof r.value).toBe("number");
      expect(typeof r.driftPct).toBe("number");
      expect(typeof r.pass).toBe("boolean");
      expect(r.params).toBeTypeOf("object");
    }
    const ratio = rowsNamed(rows, "ratio")[0];
    expect(ratio.params["p"]).toBe(2);
    expect(ratio.value).toBeGreaterThan(0);
  });

  it("reads fit columns as numbers or null", () => {
    const rows = parseResultsCsv(fixtureText("tmax-scan.csv"), "tmax-scan.csv");
    const slope = rowsNamed(rows, "t_star_slope")[0];
    expect(slope.fitExponent).toBeTypeOf("number");
    expect(slope.fitHalfwidth).toBeTypeOf("number");
    const point = rowsNamed(rows, "t_star")[0];
    expect(point.fitExponent).toBeNull();
    expect(point.fitHalfwidth).toBeNull();
  });

  it("names the missing column, for every schema column", () => {
    const text = fixtureText("tmax-scan.csv");
    for (const column of REQUIRED_COLUMNS) {
      const broken = dropColumn(text, column);
      let caught: unknown = null;
      try {
        parseResultsCsv(broken, "tmax-scan.csv");
      } catch (err) {
        caught = err;
      }
      expect(caught).toBeInstanceOf(MissingColumnError);
      expect((caught as MissingColumnError).column).toBe(column);
      expect((caught as MissingColumnError).message).toContain(
        `missing required column "${column}"`,
      );
    }
  });

  it("treats a blank file as zero rows", () => {
    expect(parseResultsCsv("", "x.csv")).toEqual([]);
    expect(parseResultsCsv("\n\n", "x.csv")).toEqual([]);
  });

  it("treats a header-only file as zero rows", () => {
    const header = fixtureText("tmax-scan.csv").split("\n")[0];
    expect(parseResultsCsv(header + "\n", "x.csv")).toEqual([]);
  });

  it("accepts non-finite float reprs", () => {
    const header = fixtureText("tmax-scan.csv").split("\n")[0];
    const row = 'tmax-scan,{},growth_unresolved,nan,inf,,,false';
    const rows = parseResultsCsv(header + "\n" + row + "\n", "x.csv");
    expect(Number.isNaN(rows[0].value)).toBe(true);
    expect(rows[0].driftPct).toBe(Infinity);
  });

  it("rejects malformed rows with the line number", () => {
    const header = fixtureText("tmax-scan.csv").split("\n")[0];
    const bad = 'tmax-scan,not-json,t_star,1.0,0.0,,,true';
    expect(() => parseResultsCsv(header + "\n" + bad + "\n", "f.csv")).toThrow(
      MalformedRowError,
    );
    const badPass = 'tmax-scan,{},t_star,1.0,0.0,,,maybe';
    expect(() => parseResultsCsv(header + "\n" + badPass + "\n", "f.csv")).toThrow(
      /row 2 in f.csv.*pass/,
    );
  });
});
