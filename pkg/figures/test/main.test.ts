import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { fileURLToPath } from "url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { REQUIRED_COLUMNS } from "../src/csv";
import { dropColumn } from "./helpers";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURES = path.join(HERE, "fixtures");
const BIN = path.join(HERE, "..", "dist", "main.js");

const EXPERIMENTS = [
  "homogeneous",
  "illposed-chirp",
  "strichartz",
  "strichartz-reg",
  "tmax-scan",
  "wellposed",
];

let workDir: string;

function makeFigures(inDir: string, outDir: string) {
  const res = spawnSync(process.execPath, [BIN, "--in", inDir, "--out", outDir], {
    encoding: "utf8",
  });
  return { code: res.status, stdout: res.stdout, stderr: res.stderr };
}

function freshInputDir(): string {
  const dir = fs.mkdtempSync(path.join(workDir, "in-"));
  for (const e of EXPERIMENTS) {
    fs.copyFileSync(path.join(FIXTURES, `${e}.csv`), path.join(dir, `${e}.csv`));
  }
  return dir;
}

beforeAll(() => {
  expect(fs.existsSync(BIN)).toBe(true);
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "make-figures-test-"));
});

afterAll(() => {
  fs.rmSync(workDir, { recursive: true, force: true });
});

describe("make-figures CLI", () => {
  it("renders one figure per report with exit code 0", () => {
    const inDir = freshInputDir();
    const outDir = path.join(workDir, "out-all");
    const res = makeFigures(inDir, outDir);
    expect(res.stderr).toBe("");
    expect(res.code).toBe(0);
    for (const e of EXPERIMENTS) {
      const file = path.join(outDir, `${e}.svg`);
      expect(fs.existsSync(file)).toBe(true);
      const body = fs.readFileSync(file, "utf8");
      expect(body.startsWith("<svg ")).toBe(true);
      expect(body).toContain("</svg>");
      expect(res.stdout).toContain(`${e}.svg`);
    }
  });

  it("writes byte-identical figures on rerun", () => {
    const inDir = freshInputDir();
    const outA = path.join(workDir, "out-a");
    const outB = path.join(workDir, "out-b");
    expect(makeFigures(inDir, outA).code).toBe(0);
    expect(makeFigures(inDir, outB).code).toBe(0);
    for (const e of EXPERIMENTS) {
      const a = fs.readFileSync(path.join(outA, `${e}.svg`));
      const b = fs.readFileSync(path.join(outB, `${e}.svg`));
      expect(a.equals(b)).toBe(true);
    }
  });

  it("fails with the column named when any required column is deleted", () => {
    for (const column of REQUIRED_COLUMNS) {
      const inDir = freshInputDir();
      const target = path.join(inDir, "tmax-scan.csv");
      fs.writeFileSync(target, dropColumn(fs.readFileSync(target, "utf8"), column));
      const res = makeFigures(inDir, path.join(workDir, `out-missing-${column}`));
      expect(res.code).toBe(1);
      expect(res.stderr).toContain(`missing required column "${column}"`);
      expect(res.stderr).toContain("tmax-scan.csv");
    }
  });

  it("renders empty axes with a warning for an empty report, exit 0", () => {
    const inDir = freshInputDir();
    const empty = path.join(inDir, "tmax-scan.csv");
    fs.writeFileSync(empty, "");
    const outDir = path.join(workDir, "out-empty");
    const res = makeFigures(inDir, outDir);
    expect(res.code).toBe(0);
    expect(res.stderr).toContain("no data rows");
    const body = fs.readFileSync(path.join(outDir, "tmax-scan.svg"), "utf8");
    expect(body).toContain("no data rows");
  });

  it("skips unrecognized reports with a warning", () => {
    const inDir = freshInputDir();
    fs.writeFileSync(path.join(inDir, "notes.csv"), "a,b\n1,2\n");
    const res = makeFigures(inDir, path.join(workDir, "out-skip"));
    expect(res.code).toBe(0);
    expect(res.stderr).toContain("skipping unrecognized report notes.csv");
    expect(fs.existsSync(path.join(workDir, "out-skip", "notes.svg"))).toBe(false);
  });

  it("warns and exits 0 when no reports exist", () => {
    const inDir = fs.mkdtempSync(path.join(workDir, "in-none-"));
    const res = makeFigures(inDir, path.join(workDir, "out-none"));
    expect(res.code).toBe(0);
    expect(res.stderr).toContain("no experiment reports found");
  });

  it("fails cleanly on a missing input directory", () => {
    const res = makeFigures(path.join(workDir, "does-not-exist"), path.join(workDir, "out-x"));
    expect(res.code).toBe(1);
    expect(res.stderr).toContain("input directory not found");
  });
});
