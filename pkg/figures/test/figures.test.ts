import * as fs from "fs";
import * as path from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";

import { parseResultsCsv, rowsNamed } from "../src/csv";
import { buildFigure, FIGURE_KINDS } from "../src/figures";
import { fmt } from "../src/svg";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURES = path.join(HERE, "fixtures");

function fixtureRows(experiment: string) {
  const file = `${experiment}.csv`;
  return parseResultsCsv(fs.readFileSync(path.join(FIXTURES, file), "utf8"), file);
}

describe("buildFigure", () => {
  it("renders valid markup for every experiment fixture", () => {
    for (const experiment of Object.keys(FIGURE_KINDS)) {
      const svg = buildFigure(experiment, fixtureRows(experiment));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      expect(svg).toContain("<circle");
      expect((svg.match(/<text/g) ?? []).length).toBeGreaterThan(3);
    }
  });

  it("is a pure function of the rows", () => {
    for (const experiment of ["tmax-scan", "strichartz", "homogeneous"]) {
      const rows = fixtureRows(experiment);
      expect(buildFigure(experiment, rows)).toBe(buildFigure(experiment, rows));
    }
  });

  it("annotates the fitted and reference exponents from the report, not a re-fit", () => {
    const rows = fixtureRows("tmax-scan");
    const svg = buildFigure("tmax-scan", rows);
    const slopeRow = rowsNamed(rows, "t_star_slope")[0];
    expect(svg).toContain(`fitted exponent ${fmt(slopeRow.fitExponent as number)}`);
    expect(svg).toContain(`reference exponent ${fmt(slopeRow.params["target"] as number)}`);
    expect(svg).toContain("(log)");
  });

  it("annotates the chirp growth fit the same way", () => {
    const rows = fixtureRows("illposed-chirp");
    const svg = buildFigure("illposed-chirp", rows);
    const fitRow = rowsNamed(rows, "growth_exponent")[0];
    expect(svg).toContain(`fitted exponent ${fmt(fitRow.fitExponent as number)}`);
    expect(svg).toContain(`reference exponent ${fmt(fitRow.params["predicted"] as number)}`);
  });

  it("shows the dilation ladder spread", () => {
    const svg = buildFigure("strichartz", fixtureRows("strichartz"));
    expect(svg).toContain("ladder spread");
    expect(svg).toContain("dilation lambda (log)");
  });

  it("marks failing rows in the failure color", () => {
    const rows = fixtureRows("homogeneous");
    expect(rows.some((r) => !r.pass)).toBe(true);
    const svg = buildFigure("homogeneous", rows);
    expect(svg).toContain("#d62728");
    expect(svg).toContain("#2ca02c");
  });

  it("renders empty axes for zero rows", () => {
    for (const experiment of Object.keys(FIGURE_KINDS)) {
      const svg = buildFigure(experiment, []);
      expect(svg).toContain("no data rows");
      expect(svg.startsWith("<svg ")).toBe(true);
    }
  });

  it("rejects unknown experiments by name", () => {
    expect(() => buildFigure("mystery", [])).toThrow(/mystery/);
  });
});
