/** Small hand-rolled SVG chart primitives (no DOM, headless-safe). */

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  return fn;
}

/** Round tick positions covering the domain (at most `count` ticks). */
export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  const span = hi - lo || 1;
  const rawStep = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? 10 * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-9; v += step) {
    out.push(Number(v.toFixed(10)));
  }
  return out;
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

export class SvgBuilder {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#333", width = 1): void {
    this.raw(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" y2="${y2.toFixed(2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.raw(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.raw(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${h.toFixed(2)}" fill="${fill}" fill-opacity="${opacity}"/>`,
    );
  }

  text(x: number, y: number, content: string, opts: { size?: number; anchor?: string; rotate?: boolean } = {}): void {
    const size = opts.size ?? 11;
    const anchor = opts.anchor ?? "start";
    const transform = opts.rotate ? ` transform="rotate(-90 ${x} ${y})"` : "";
    this.raw(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-size="${size}" font-family="sans-serif" text-anchor="${anchor}"${transform}>${esc(content)}</text>`,
    );
  }

  /** Left/bottom axes with tick labels. */
  axes(xs: Scale, ys: Scale, box: { left: number; right: number; top: number; bottom: number }, xLabel: string, yLabel: string): void {
    this.line(box.left, box.bottom, box.right, box.bottom);
    this.line(box.left, box.top, box.left, box.bottom);
    for (const tx of ticks(xs.domain)) {
      const px = xs(tx);
      this.line(px, box.bottom, px, box.bottom + 4);
      this.text(px, box.bottom + 16, String(tx), { anchor: "middle", size: 10 });
    }
    for (const ty of ticks(ys.domain)) {
      const py = ys(ty);
      this.line(box.left - 4, py, box.left, py);
      this.text(box.left - 7, py + 3, String(ty), { anchor: "end", size: 10 });
    }
    this.text((box.left + box.right) / 2, this.height - 6, xLabel, { anchor: "middle" });
    this.text(14, (box.top + box.bottom) / 2, yLabel, { anchor: "middle", rotate: true });
  }

  legend(x: number, y: number, entries: Array<[string, string]>): void {
    entries.forEach(([label, color], i) => {
      const ly = y + i * 16;
      this.rect(x, ly - 8, 12, 8, color);
      this.text(x + 16, ly, label, { size: 10 });
    });
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>` +
      this.parts.join("") +
      `</svg>`
    );
  }
}
