/**
 * Standalone SVG export of a diagram: tensor shapes, index lines (straight
 * or curved through their control point), anchor numerals inside each
 * tensor, and numbered plaques on open ends.
 */

import {
  ProjectDoc,
  anchorPosition,
  edgeEndPosition,
  isOpenEnd,
} from "./model.js";

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function rgb(c?: [number, number, number]): string {
  const [r, g, b] = c ?? [60, 60, 60];
  return `rgb(${r},${g},${b})`;
}

export function exportSvg(project: ProjectDoc): string {
  const parts: string[] = [];
  let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
  const grow = (x: number, y: number) => {
    minX = Math.min(minX, x); minY = Math.min(minY, y);
    maxX = Math.max(maxX, x); maxY = Math.max(maxY, y);
  };

  const types = new Map(project.index_types.map((it) => [it.id, it]));

  for (const e of project.edges) {
    const a = edgeEndPosition(project, e.end_a);
    const b = edgeEndPosition(project, e.end_b);
    grow(a.x, a.y); grow(b.x, b.y);
    const it = types.get(e.index_type);
    const stroke = rgb(it?.color);
    const width = it?.thickness ?? 1.5;
    const open = isOpenEnd(e.end_b);
    const cls = open ? "index open" : "index internal";
    const g = e.geometry ?? {};
    if (g.cx !== undefined && g.cy !== undefined) {
      parts.push(`<path class="${cls}" d="M ${a.x} ${a.y} Q ${g.cx} ${g.cy} ${b.x} ${b.y}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
    } else {
      parts.push(`<line class="${cls}" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" stroke="${stroke}" stroke-width="${width}"/>`);
    }
    if (open && isOpenEnd(e.end_b)) {
      parts.push(`<circle class="plaque" cx="${b.x}" cy="${b.y}" r="9" fill="#9be09b" stroke="#2c7a2c"/>`);
      parts.push(`<text class="plaque-label" x="${b.x}" y="${b.y + 4}" text-anchor="middle" font-size="11">${e.end_b.plaque}</text>`);
    }
  }

  for (const t of project.tensors) {
    const g = t.geometry ?? {};
    const x = g.x ?? 0, y = g.y ?? 0, w = g.w ?? 80, h = g.h ?? 50;
    grow(x, y); grow(x + w, y + h);
    const fill = g.color ?? "#7fb2e5";
    const opacity = g.opacity ?? 1;
    if (g.shape === "ellipse") {
      parts.push(`<ellipse class="tensor" cx="${x + w / 2}" cy="${y + h / 2}" rx="${w / 2}" ry="${h / 2}" fill="${fill}" fill-opacity="${opacity}" stroke="#234"/>`);
    } else {
      parts.push(`<rect class="tensor" x="${x}" y="${y}" width="${w}" height="${h}" rx="6" fill="${fill}" fill-opacity="${opacity}" stroke="#234"/>`);
    }
    if (t.name) {
      parts.push(`<text class="tensor-name" x="${x + w / 2}" y="${y + h / 2 + 4}" text-anchor="middle" font-size="13">${esc(t.name)}</text>`);
    }
    for (let k = 1; k <= t.anchor_count; k++) {
      const pos = anchorPosition(t, k);
      parts.push(`<rect class="anchor" x="${pos.x - 7}" y="${pos.y - 7}" width="14" height="14" rx="3" fill="#bcd6f7" stroke="#3a6ea5"/>`);
      parts.push(`<text class="anchor-label" x="${pos.x}" y="${pos.y + 4}" text-anchor="middle" font-size="10">${k}</text>`);
    }
    if (t.network !== undefined) {
      parts.push(`<text class="network-tag" x="${x + w - 4}" y="${y + 12}" text-anchor="end" font-size="10" fill="#555">net ${t.network}</text>`);
    }
  }

  if (!isFinite(minX)) { minX = 0; minY = 0; maxX = 100; maxY = 100; }
  const pad = 30;
  const vb = `${minX - pad} ${minY - pad} ${maxX - minX + 2 * pad} ${maxY - minY + 2 * pad}`;
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${vb}" font-family="sans-serif">`,
    ...parts,
    `</svg>`,
    ``,
  ].join("\n");
}
