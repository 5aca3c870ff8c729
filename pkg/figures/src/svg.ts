/**
 * Minimal deterministic SVG scene builder.
 *
 * Figures must be pure functions of their input rows: no timestamps, no
 * random ids, and a fixed number formatter so the same rows always produce
 * byte-identical markup.
 */

export const WIDTH = 760;
export const HEIGHT = 480;
export const MARGIN = { top: 48, right: 32, bottom: 56, left: 72 };

export const COLORS = {
  axis: "#333333",
  gridline: "#dddddd",
  point: "#1f77b4",
  fit: "#d62728",
  reference: "#2ca02c",
  pass: "#2ca02c",
  fail: "#d62728",
  text: "#222222",
  muted: "#777777",
};

/** Fixed-precision, trailing-zero-free formatter (deterministic). */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (x === 0) return "0";
  let s = x.toPrecision(6);
  if (s.includes("e")) {
    const [mant, exp] = s.split("e");
    return trimZeros(mant) + "e" + exp;
  }
  return trimZeros(s);
}

function trimZeros(s: string): string {
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export type Scale = {
  (v: number): number;
  ticks(): number[];
  domain: [number, number];
};

/** Linear scale with ~6 “nice” ticks. */
export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const f = ((v: number) => range[0] + ((v - d0) / (d1 - d0)) * (range[1] - range[0])) as Scale;
  f.domain = [d0, d1];
  f.ticks = () => niceTicks(d0, d1, 6);
  return f;
}

/** Log10 scale; ticks at decades (subdivided by 2 and 5 when sparse). */
export function logScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (!(d0 > 0) || !(d1 > 0)) {
    throw new Error("log scale needs a positive domain");
  }
  if (d0 === d1) {
    d0 /= 2;
    d1 *= 2;
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const f = ((v: number) =>
    range[0] + ((Math.log10(v) - l0) / (l1 - l0)) * (range[1] - range[0])) as Scale;
  f.domain = [d0, d1];
  f.ticks = () => {
    const ticks: number[] = [];
    const lo = Math.floor(l0);
    const hi = Math.ceil(l1);
    const mantissas = hi - lo <= 1 ? [1, 2, 5] : hi - lo <= 3 ? [1, 3] : [1];
    for (let e = lo; e <= hi; e++) {
      for (const m of mantissas) {
        const v = m * Math.pow(10, e);
        if (v >= d0 * 0.999999 && v <= d1 * 1.000001) ticks.push(v);
      }
    }
    return ticks.length >= 2 ? ticks : [d0, d1];
  };
  return f;
}

function niceTicks(lo: number, hi: number, n: number): number[] {
  const span = hi - lo;
  const rawStep = span / Math.max(1, n - 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export interface PanelBox {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Full-figure panel inside the margins. */
export function fullPanel(): PanelBox {
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom,
  };
}

/** Two stacked panels inside the margins. */
export function stackedPanels(gap = 52): [PanelBox, PanelBox] {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const h = (innerH - gap) / 2;
  return [
    { x0, y0: MARGIN.top, x1, y1: MARGIN.top + h },
    { x0, y0: MARGIN.top + h + gap, x1, y1: HEIGHT - MARGIN.bottom },
  ];
}

export class Svg {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${fmt(width)}"${d}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; anchor?: string; fill?: string; rotate?: number } = {},
  ): void {
    const size = opts.size ?? 12;
    const anchor = opts.anchor ?? "start";
    const fill = opts.fill ?? COLORS.text;
    const transform =
      opts.rotate === undefined ? "" : ` transform="rotate(${fmt(opts.rotate)} ${fmt(x)} ${fmt(y)})"`;
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica, Arial, sans-serif" ` +
        `font-size="${fmt(size)}" text-anchor="${anchor}" fill="${fill}"${transform}>` +
        `${escapeXml(content)}</text>`,
    );
  }

  /** Axes, gridlines, and tick labels for one panel. */
  axes(panel: PanelBox, x: Scale, y: Scale, xLabel: string, yLabel: string): void {
    for (const t of x.ticks()) {
      const px = x(t);
      this.line(px, panel.y0, px, panel.y1, COLORS.gridline);
      this.text(px, panel.y1 + 18, fmt(t), { anchor: "middle", size: 11 });
    }
    for (const t of y.ticks()) {
      const py = y(t);
      this.line(panel.x0, py, panel.x1, py, COLORS.gridline);
      this.text(panel.x0 - 8, py + 4, fmt(t), { anchor: "end", size: 11 });
    }
    this.line(panel.x0, panel.y1, panel.x1, panel.y1, COLORS.axis, 1.5);
    this.line(panel.x0, panel.y0, panel.x0, panel.y1, COLORS.axis, 1.5);
    this.text((panel.x0 + panel.x1) / 2, panel.y1 + 40, xLabel, { anchor: "middle" });
    this.text(panel.x0 - 52, (panel.y0 + panel.y1) / 2, yLabel, {
      anchor: "middle",
      rotate: -90,
    });
  }

  render(title: string): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
      `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      `<text x="${WIDTH / 2}" y="26" font-family="Helvetica, Arial, sans-serif" ` +
      `font-size="15" text-anchor="middle" fill="${COLORS.text}" font-weight="bold">` +
      `${escapeXml(title)}</text>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}
