/**
 * Deck preview rendering: SVG thumbnail strings built from deck JSON.
 *
 * Geometry mirrors the server-side renderer's invariants: pie wedge angles
 * are proportional to values and sum to exactly 360 for each pie; bar
 * heights are proportional to values. Output is plain SVG markup so it can
 * be unit-tested without a DOM and dropped into innerHTML by a host page.
 */

import type { ChartObject, Deck, Slide, SlideObject } from "./types.js";

const WIDTH = 320;
const HEIGHT = 200;
const PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948"];

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Wedge angles in degrees, proportional to the values and summing to
 * exactly 360 (the final wedge absorbs rounding residue). All-zero input
 * degenerates to equal wedges.
 */
export function pieAngles(values: number[]): number[] {
  if (values.length === 0) return [];
  const total = values.reduce((a, b) => a + b, 0);
  const weights = total > 0 ? values.map((v) => v / total) : values.map(() => 1 / values.length);
  const angles = weights.map((w) => w * 360);
  const sum = angles.slice(0, -1).reduce((a, b) => a + b, 0);
  angles[angles.length - 1] = 360 - sum;
  return angles;
}

function polar(cx: number, cy: number, r: number, angleDeg: number): [number, number] {
  const rad = ((angleDeg - 90) * Math.PI) / 180;
  return [cx + r * Math.cos(rad), cy + r * Math.sin(rad)];
}

function renderPie(chart: ChartObject): string {
  const values = chart.series[0]?.values ?? [];
  const angles = pieAngles(values);
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2;
  const r = Math.min(WIDTH, HEIGHT) / 2 - 10;
  const parts: string[] = [];
  let start = 0;
  angles.forEach((angle, i) => {
    const end = start + angle;
    const [x1, y1] = polar(cx, cy, r, start);
    const [x2, y2] = polar(cx, cy, r, end);
    const large = angle > 180 ? 1 : 0;
    const d =
      angle >= 360
        ? `M ${cx - r} ${cy} A ${r} ${r} 0 1 1 ${cx + r} ${cy} A ${r} ${r} 0 1 1 ${cx - r} ${cy}`
        : `M ${cx} ${cy} L ${x1.toFixed(2)} ${y1.toFixed(2)} A ${r} ${r} 0 ${large} 1 ${x2.toFixed(2)} ${y2.toFixed(2)} Z`;
    parts.push(
      `<path d="${d}" fill="${PALETTE[i % PALETTE.length]}" data-angle="${angle.toFixed(4)}"/>`,
    );
    start = end;
  });
  return parts.join("");
}

function renderBars(chart: ChartObject): string {
  const values = chart.series[0]?.values ?? [];
  if (values.length === 0) return "";
  const max = Math.max(...values, 0);
  const slot = WIDTH / values.length;
  const barWidth = slot * 0.7;
  return values
    .map((v, i) => {
      const h = max > 0 ? (v / max) * (HEIGHT - 20) : 0;
      const x = i * slot + (slot - barWidth) / 2;
      const y = HEIGHT - h;
      return `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${barWidth.toFixed(2)}" height="${h.toFixed(2)}" fill="${PALETTE[0]}"/>`;
    })
    .join("");
}

function renderLines(chart: ChartObject): string {
  const all = chart.series.flatMap((s) => s.values);
  if (all.length === 0) return "";
  const min = Math.min(...all);
  const max = Math.max(...all);
  const span = max - min || 1;
  return chart.series
    .map((s, si) => {
      const n = s.values.length;
      const points = s.values
        .map((v, i) => {
          const x = n > 1 ? (i / (n - 1)) * WIDTH : WIDTH / 2;
          const y = HEIGHT - 10 - ((v - min) / span) * (HEIGHT - 20);
          return `${x.toFixed(2)},${y.toFixed(2)}`;
        })
        .join(" ");
      return `<polyline points="${points}" fill="none" stroke="${PALETTE[si % PALETTE.length]}" stroke-width="2"/>`;
    })
    .join("");
}

function renderTextRows(lines: string[]): string {
  return lines
    .slice(0, 8)
    .map(
      (line, i) =>
        `<text x="8" y="${20 + i * 22}" font-size="12">${escapeXml(line)}</text>`,
    )
    .join("");
}

function renderObject(object: SlideObject): string {
  if (object.kind === "chart") {
    if (object.chart_kind === "piechart") return renderPie(object);
    if (object.chart_kind === "barchart") return renderBars(object);
    if (object.chart_kind === "linechart") return renderLines(object);
    // chart_kind === "table": series rendered as text rows
    return renderTextRows(
      object.series.map((s) => `${s.label}: ${s.values.map((v) => v.toFixed(2)).join(", ")}`),
    );
  }
  if (object.kind === "insight") return renderTextRows(object.lines);
  return renderTextRows(object.rows.map((row) => row.join(" | ")));
}

export function slideThumbnail(slide: Slide): string {
  const body = slide.objects.map(renderObject).join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT + 24}" width="${WIDTH}" height="${HEIGHT + 24}">` +
    `<text x="8" y="14" font-size="13" font-weight="bold">${escapeXml(slide.title)}</text>` +
    `<g transform="translate(0,24)">${body}</g>` +
    `</svg>`
  );
}

/** One SVG string per slide, in deck order. */
export function deckThumbnails(deck: Deck): string[] {
  return deck.slides.map(slideThumbnail);
}

/** Placeholder shown before the first deck exists. */
export function emptyPreview(): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" width="${WIDTH}" height="${HEIGHT}">` +
    `<text x="8" y="20" font-size="13">No deck yet</text>` +
    `</svg>`
  );
}
