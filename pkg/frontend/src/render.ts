/**
 * Client-side SVG serialization of a sentence's geometry payload.
 *
 * Mirrors the server's renderer byte for byte, so a drawing produced here
 * from GET /sentences/{id} equals GET /render/{id} exactly; the
 * integration suite holds the two implementations to that standard.
 */

import type { Geometry } from "./schema.js";

export const UNLABELED = "--";

const STYLE =
  "text{font-family:monospace;font-size:13px;text-anchor:middle}" +
  ".pos{fill:#555;font-size:11px}" +
  ".cat{font-weight:bold}" +
  ".fn{fill:#036;font-size:11px}" +
  ".fn.unlabeled{fill:#c00}" +
  "line.edge{stroke:#333;stroke-width:1}" +
  "line.link{stroke:#888;stroke-width:1;stroke-dasharray:4 3}" +
  "circle.warn{fill:#c00}" +
  "circle.anchor{fill:#333}";

/**
 * One-decimal formatting with ties-to-even, matching Python's float
 * formatting.  Coordinates are quarter-integers, so the scaled value is
 * exact and the tie test is safe; toFixed would round 0.25 the other way.
 */
export function fmt(value: number): string {
  const scaled = value * 10;
  const floor = Math.floor(scaled);
  const frac = scaled - floor;
  let tenths: number;
  if (frac === 0.5) {
    tenths = floor % 2 === 0 ? floor : floor + 1;
  } else {
    tenths = Math.round(scaled);
  }
  const sign = tenths < 0 ? "-" : "";
  const abs = Math.abs(tenths);
  return `${sign}${Math.trunc(abs / 10)}.${abs % 10}`;
}

export function escapeText(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(g: Geometry): string {
  const out: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(g.width)}" ` +
      `height="${fmt(g.height)}" viewBox="0 0 ${fmt(g.width)} ${fmt(g.height)}">`,
    `<style>${STYLE}</style>`,
  ];
  for (const e of g.edges) {
    out.push(
      `<line class="edge" x1="${fmt(e.x1)}" y1="${fmt(e.y1)}" ` +
        `x2="${fmt(e.x2)}" y2="${fmt(e.y2)}"/>`,
    );
  }
  for (const l of g.links) {
    out.push(
      `<line class="link" x1="${fmt(l.x1)}" y1="${fmt(l.y1)}" ` +
        `x2="${fmt(l.x2)}" y2="${fmt(l.y2)}"/>`,
    );
  }
  for (const e of g.edges) {
    const css = e.function === UNLABELED ? "fn unlabeled" : "fn";
    const labelX = (e.x1 + e.x2) / 2;
    const labelY = (e.y1 + e.y2) / 2;
    out.push(
      `<text class="${css}" x="${fmt(labelX)}" y="${fmt(labelY - 3)}">` +
        `${escapeText(e.function)}</text>`,
    );
  }
  for (const l of g.links) {
    if (l.function !== null) {
      out.push(
        `<text class="fn" x="${fmt((l.x1 + l.x2) / 2)}" ` +
          `y="${fmt((l.y1 + l.y2) / 2 + 11)}">${escapeText(l.function)}</text>`,
      );
    }
  }
  for (const n of g.nodes) {
    out.push(`<circle class="anchor" cx="${fmt(n.x)}" cy="${fmt(n.y)}" r="3"/>`);
    if (n.childless) {
      out.push(`<circle class="warn" cx="${fmt(n.x)}" cy="${fmt(n.y - 16)}" r="4"/>`);
    }
    out.push(
      `<text class="cat" x="${fmt(n.x)}" y="${fmt(n.y - 6)}">` +
        `${escapeText(n.category)}</text>`,
    );
  }
  for (const t of g.tokens) {
    out.push(
      `<text x="${fmt(t.x)}" y="${fmt(t.y + 18)}">${escapeText(t.form)}` +
        `<tspan class="pos" x="${fmt(t.x)}" y="${fmt(t.y + 34)}">` +
        `${escapeText(t.pos_tag)}</tspan></text>`,
    );
  }
  out.push("</svg>");
  return out.join("\n") + "\n";
}
