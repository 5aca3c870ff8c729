/**
 * One figure per experiment report.
 *
 * Three figure kinds cover the six report flavors:
 *   scatter-fit — log-log scatter with the fitted exponent read from the
 *                 report (never re-fit here) and a dashed reference slope;
 *   ladder      — the dilation ladder plus refinement-drift bars;
 *   drift       — value points and drift bars, pass/fail colored.
 *
 * Every builder is a pure function of the parsed rows.
 */

import { numParam, ResultRow, rowsNamed } from "./csv";
import {
  COLORS,
  fmt,
  fullPanel,
  linearScale,
  logScale,
  PanelBox,
  Scale,
  stackedPanels,
  Svg,
} from "./svg";

export type FigureKind = "scatter-fit" | "ladder" | "drift";

export const FIGURE_KINDS: Record<string, FigureKind> = {
  "tmax-scan": "scatter-fit",
  "illposed-chirp": "scatter-fit",
  strichartz: "ladder",
  wellposed: "drift",
  homogeneous: "drift",
  "strichartz-reg": "drift",
};

/** Figure titles, keyed by experiment. */
const TITLES: Record<string, string> = {
  "tmax-scan": "Certified horizon T*(M) vs data size",
  "illposed-chirp": "sup-in-time Sobolev growth along the chirp ladder",
  strichartz: "Space-time/data ratio: dilation ladder and refinement drift",
  wellposed: "Sub-threshold persistence: Lipschitz ratios and drift",
  homogeneous: "Homogeneous-data battery: window membership and smoothing",
  "strichartz-reg": "Weighted space-time ratios: free flow vs solved",
};

export function figureTitle(experiment: string): string {
  return TITLES[experiment] ?? experiment;
}

function passColor(pass: boolean): string {
  return pass ? COLORS.pass : COLORS.fail;
}

function emptyFigure(title: string): string {
  const svg = new Svg();
  const panel = fullPanel();
  const x = linearScale([0, 1], [panel.x0, panel.x1]);
  const y = linearScale([0, 1], [panel.y1, panel.y0]);
  svg.axes(panel, x, y, "", "");
  svg.text((panel.x0 + panel.x1) / 2, (panel.y0 + panel.y1) / 2, "no data rows", {
    anchor: "middle",
    size: 14,
    fill: COLORS.muted,
  });
  return svg.render(title);
}

function extent(values: number[], pad = 1.25): [number, number] {
  return [Math.min(...values) / pad, Math.max(...values) * pad];
}

/** Power-law guide line through the points' log-centroid. */
function guideLine(
  svg: Svg,
  x: Scale,
  y: Scale,
  pts: Array<{ x: number; y: number }>,
  slope: number,
  color: string,
  dash: string,
): void {
  const cx = Math.exp(pts.reduce((s, p) => s + Math.log(p.x), 0) / pts.length);
  const cy = Math.exp(pts.reduce((s, p) => s + Math.log(p.y), 0) / pts.length);
  const [d0, d1] = x.domain;
  const yAt = (v: number) => cy * Math.pow(v / d0, slope) * Math.pow(d0 / cx, slope);
  svg.line(x(d0), y(yAt(d0)), x(d1), y(yAt(d1)), color, 1.5, dash);
}

interface ScatterFitData {
  points: Array<{ x: number; y: number; pass: boolean }>;
  xLabel: string;
  yLabel: string;
  fitSlope: number | null;
  fitHalfwidth: number | null;
  referenceSlope: number | null;
}

function scatterFitData(experiment: string, rows: ResultRow[]): ScatterFitData {
  if (experiment === "tmax-scan") {
    const slopeRow = rowsNamed(rows, "t_star_slope")[0];
    return {
      points: rowsNamed(rows, "t_star").map((r) => ({
        x: numParam(r, "M"),
        y: r.value,
        pass: r.pass,
      })),
      xLabel: "data size M",
      yLabel: "certified horizon T*",
      fitSlope: slopeRow?.fitExponent ?? null,
      fitHalfwidth: slopeRow?.fitHalfwidth ?? null,
      referenceSlope: slopeRow ? numParam(slopeRow, "target") : null,
    };
  }
  // illposed-chirp
  const fitRow = rowsNamed(rows, "growth_exponent")[0];
  return {
    points: rowsNamed(rows, "growth").map((r) => ({
      x: numParam(r, "N"),
      y: r.value,
      pass: r.pass,
    })),
    xLabel: "chirp scale N",
    yLabel: "sup-t Sobolev / data norm",
    fitSlope: fitRow?.fitExponent ?? null,
    fitHalfwidth: fitRow?.fitHalfwidth ?? null,
    referenceSlope: fitRow ? numParam(fitRow, "predicted") : null,
  };
}

function buildScatterFit(experiment: string, rows: ResultRow[]): string {
  const title = figureTitle(experiment);
  const data = scatterFitData(experiment, rows);
  const pts = data.points.filter(
    (p) => Number.isFinite(p.x) && Number.isFinite(p.y) && p.x > 0 && p.y > 0,
  );
  if (pts.length === 0) {
    return emptyFigure(title);
  }
  const svg = new Svg();
  const panel = fullPanel();
  const x = logScale(extent(pts.map((p) => p.x)), [panel.x0, panel.x1]);
  const y = logScale(extent(pts.map((p) => p.y)), [panel.y1, panel.y0]);
  svg.axes(panel, x, y, data.xLabel + " (log)", data.yLabel + " (log)");
  if (data.referenceSlope !== null) {
    guideLine(svg, x, y, pts, data.referenceSlope, COLORS.reference, "6 4");
  }
  if (data.fitSlope !== null) {
    guideLine(svg, x, y, pts, data.fitSlope, COLORS.fit, "");
  }
  for (const p of pts) {
    svg.circle(x(p.x), y(p.y), 4.5, passColor(p.pass));
  }
  let legendY = panel.y0 + 16;
  if (data.fitSlope !== null) {
    const hw = data.fitHalfwidth === null ? "" : ` ± ${fmt(data.fitHalfwidth)}`;
    svg.line(panel.x0 + 12, legendY - 4, panel.x0 + 40, legendY - 4, COLORS.fit, 1.5);
    svg.text(panel.x0 + 46, legendY, `fitted exponent ${fmt(data.fitSlope)}${hw}`, { size: 12 });
    legendY += 18;
  }
  if (data.referenceSlope !== null) {
    svg.line(panel.x0 + 12, legendY - 4, panel.x0 + 40, legendY - 4, COLORS.reference, 1.5, "6 4");
    svg.text(panel.x0 + 46, legendY, `reference exponent ${fmt(data.referenceSlope)}`, {
      size: 12,
    });
  }
  return svg.render(title);
}

/** Categorical bar panel for drift/value rows. */
function barPanel(
  svg: Svg,
  panel: PanelBox,
  items: Array<{ label: string; value: number; pass: boolean }>,
  yLabel: string,
): void {
  const finite = items.map((it) => (Number.isFinite(it.value) ? it.value : 0));
  const top = Math.max(...finite, 0) * 1.25 || 1;
  const bottom = Math.min(...finite, 0);
  const y = linearScale([bottom, top], [panel.y1, panel.y0]);
  const x = linearScale([0, items.length], [panel.x0, panel.x1]);
  for (const t of y.ticks()) {
    svg.line(panel.x0, y(t), panel.x1, y(t), COLORS.gridline);
    svg.text(panel.x0 - 8, y(t) + 4, fmt(t), { anchor: "end", size: 11 });
  }
  const slot = (panel.x1 - panel.x0) / Math.max(1, items.length);
  const barW = Math.min(42, slot * 0.6);
  items.forEach((it, i) => {
    const cx = x(i + 0.5);
    const v = Number.isFinite(it.value) ? it.value : 0;
    const y0 = Math.min(y(0), y(v));
    const h = Math.abs(y(v) - y(0));
    svg.rect(cx - barW / 2, y0, barW, Math.max(h, 0.75), passColor(it.pass));
    svg.text(cx, panel.y1 + 14, it.label, {
      anchor: "end",
      size: 10,
      rotate: -30,
    });
  });
  svg.line(panel.x0, panel.y1, panel.x1, panel.y1, COLORS.axis, 1.5);
  svg.line(panel.x0, panel.y0, panel.x0, panel.y1, COLORS.axis, 1.5);
  svg.text(panel.x0 - 52, (panel.y0 + panel.y1) / 2, yLabel, { anchor: "middle", rotate: -90 });
}

function buildLadder(rows: ResultRow[]): string {
  const title = figureTitle("strichartz");
  const ladder = rowsNamed(rows, "lambda_ratio").map((r) => ({
    x: numParam(r, "lam"),
    y: r.value,
    pass: r.pass,
  }));
  if (rows.length === 0) {
    return emptyFigure(title);
  }
  const svg = new Svg();
  const [top, bottom] = stackedPanels();
  if (ladder.length > 0) {
    const x = logScale(extent(ladder.map((p) => p.x), 1.15), [top.x0, top.x1]);
    const lo = Math.min(...ladder.map((p) => p.y));
    const hi = Math.max(...ladder.map((p) => p.y));
    const span = Math.max(hi - lo, hi * 0.02);
    const y = linearScale([lo - span, hi + span], [top.y1, top.y0]);
    svg.axes(top, x, y, "dilation lambda (log)", "ratio");
    svg.line(top.x0, y(lo), top.x1, y(lo), COLORS.muted, 1, "3 3");
    svg.line(top.x0, y(hi), top.x1, y(hi), COLORS.muted, 1, "3 3");
    for (const p of ladder) {
      svg.circle(x(p.x), y(p.y), 4.5, passColor(p.pass));
    }
    const spreadRow = rowsNamed(rows, "lambda_spread_pct")[0];
    if (spreadRow !== undefined) {
      svg.text(top.x1 - 8, top.y0 + 16, `ladder spread ${fmt(spreadRow.value)}%`, {
        anchor: "end",
        size: 12,
        fill: passColor(spreadRow.pass),
      });
    }
  }
  const gates = ["box_doubling_drift_pct", "grid_doubling_drift_pct", "tbox_doubling_drift_pct"];
  const short: Record<string, string> = {
    box_doubling_drift_pct: "box x2",
    grid_doubling_drift_pct: "grid x2",
    tbox_doubling_drift_pct: "T x2",
  };
  const items = rows
    .filter((r) => gates.includes(r.valueName))
    .map((r) => ({
      label: `${String(r.params["datum"] ?? "?")} ${short[r.valueName]}`,
      value: r.value,
      pass: r.pass,
    }));
  if (items.length > 0) {
    barPanel(svg, bottom, items, "drift %");
  }
  return svg.render(title);
}

function buildDrift(experiment: string, rows: ResultRow[]): string {
  const title = figureTitle(experiment);
  if (rows.length === 0) {
    return emptyFigure(title);
  }
  const svg = new Svg();
  const [top, bottom] = stackedPanels();

  let pointItems: Array<{ label: string; value: number; pass: boolean }> = [];
  let pointLabel = "";
  let barItems: Array<{ label: string; value: number; pass: boolean }> = [];
  let barLabel = "drift %";

  if (experiment === "wellposed") {
    pointItems = rowsNamed(rows, "lipschitz_ratio").map((r) => ({
      label: `pair ${String(r.params["pair_seed"])}`,
      value: r.value,
      pass: r.pass,
    }));
    pointLabel = "Lipschitz ratio";
    barItems = rows
      .filter((r) => ["sup_sobolev", "contraction_ratio_last"].includes(r.valueName))
      .map((r) => ({
        label: `${String(r.params["datum"])} ${
          r.valueName === "sup_sobolev" ? "drift" : "contraction"
        }`,
        value: r.valueName === "sup_sobolev" ? r.driftPct : r.value,
        pass: r.pass,
      }));
    barLabel = "drift % / ratio";
  } else if (experiment === "homogeneous") {
    pointItems = rowsNamed(rows, "membership_norm").map((r) => ({
      label: `a=${fmt(numParam(r, "a"))} p=${fmt(numParam(r, "p"))}`,
      value: r.driftPct,
      pass: r.pass,
    }));
    pointLabel = "window-doubling drift %";
    barItems = rows
      .filter((r) => ["duhamel_l2", "data_l2", "farfield_norm"].includes(r.valueName))
      .map((r) => ({
        label: `${r.valueName}${"length" in r.params ? ` L=${fmt(numParam(r, "length"))}` : ""}`,
        value: r.driftPct,
        pass: r.pass,
      }));
    barLabel = "drift / growth %";
  } else {
    // strichartz-reg
    pointItems = rows
      .filter((r) => ["free_ratio", "solved_ratio"].includes(r.valueName))
      .map((r) => ({
        label: `${String(r.params["datum"])} ${r.valueName === "free_ratio" ? "free" : "solved"}`,
        value: r.value,
        pass: r.pass,
      }));
    pointLabel = "weighted ratio";
    barItems = rows
      .filter((r) => ["free_ratio", "solved_ratio"].includes(r.valueName))
      .map((r) => ({
        label: `${String(r.params["datum"])} ${r.valueName === "free_ratio" ? "free" : "solved"}`,
        value: r.driftPct,
        pass: r.pass,
      }));
  }

  if (pointItems.length > 0) {
    const x = linearScale([0, pointItems.length], [top.x0, top.x1]);
    const vals = pointItems.map((p) => (Number.isFinite(p.value) ? p.value : 0));
    const hi = Math.max(...vals, 0) * 1.25 || 1;
    const lo = Math.min(...vals, 0);
    const y = linearScale([lo, hi], [top.y1, top.y0]);
    svg.axes(top, x, y, "", pointLabel);
    pointItems.forEach((p, i) => {
      svg.circle(x(i + 0.5), y(Number.isFinite(p.value) ? p.value : 0), 4.5, passColor(p.pass));
      svg.text(x(i + 0.5), top.y1 + 14, p.label, { anchor: "end", size: 10, rotate: -30 });
    });
  }
  if (barItems.length > 0) {
    barPanel(svg, bottom, barItems, barLabel);
  }
  return svg.render(title);
}

/** Build the figure markup for one experiment's parsed rows. */
export function buildFigure(experiment: string, rows: ResultRow[]): string {
  const kind = FIGURE_KINDS[experiment];
  if (kind === "scatter-fit") {
    return buildScatterFit(experiment, rows);
  }
  if (kind === "ladder") {
    return buildLadder(rows);
  }
  if (kind === "drift") {
    return buildDrift(experiment, rows);
  }
  throw new Error(`no figure kind registered for experiment "${experiment}"`);
}
