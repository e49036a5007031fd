/** Canvas rendering and hit-testing for the editor. */

import { EditorState } from "./editor.js";
import {
  ProjectDoc,
  anchorPosition,
  edgeEndPosition,
  isOpenEnd,
} from "./model.js";

export type Hit =
  | { kind: "anchor"; tensor: number; anchor: number }
  | { kind: "plaque"; edge: number }
  | { kind: "tensor"; tensor: number }
  | { kind: "edge"; edge: number }
  | { kind: "empty" };

export function hitTest(project: ProjectDoc, x: number, y: number): Hit {
  for (const t of [...project.tensors].reverse()) {
    for (let k = 1; k <= t.anchor_count; k++) {
      const p = anchorPosition(t, k);
      if (Math.abs(p.x - x) <= 9 && Math.abs(p.y - y) <= 9) {
        return { kind: "anchor", tensor: t.id, anchor: k };
      }
    }
  }
  for (const e of [...project.edges].reverse()) {
    if (isOpenEnd(e.end_b)) {
      const p = edgeEndPosition(project, e.end_b);
      if ((p.x - x) ** 2 + (p.y - y) ** 2 <= 12 ** 2) {
        return { kind: "plaque", edge: e.id };
      }
    }
  }
  for (const t of [...project.tensors].reverse()) {
    const g = t.geometry ?? {};
    const tx = g.x ?? 0, ty = g.y ?? 0, w = g.w ?? 80, h = g.h ?? 50;
    if (x >= tx && x <= tx + w && y >= ty && y <= ty + h) {
      return { kind: "tensor", tensor: t.id };
    }
  }
  for (const e of [...project.edges].reverse()) {
    const a = edgeEndPosition(project, e.end_a);
    const b = edgeEndPosition(project, e.end_b);
    if (distToSegment(x, y, a.x, a.y, b.x, b.y) < 6) {
      return { kind: "edge", edge: e.id };
    }
  }
  return { kind: "empty" };
}

function distToSegment(px: number, py: number, x1: number, y1: number,
                       x2: number, y2: number): number {
  const dx = x2 - x1, dy = y2 - y1;
  const len2 = dx * dx + dy * dy;
  let t = len2 === 0 ? 0 : ((px - x1) * dx + (py - y1) * dy) / len2;
  t = Math.max(0, Math.min(1, t));
  return Math.hypot(px - (x1 + t * dx), py - (y1 + t * dy));
}

export function render(state: EditorState, ctx: CanvasRenderingContext2D,
                       cursor?: { x: number; y: number }): void {
  const { project } = state;
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  const types = new Map(project.index_types.map((it) => [it.id, it]));

  for (const e of project.edges) {
    const a = edgeEndPosition(project, e.end_a);
    const b = edgeEndPosition(project, e.end_b);
    const it = types.get(e.index_type);
    const [r, g, bl] = it?.color ?? [60, 60, 60];
    ctx.strokeStyle = `rgb(${r},${g},${bl})`;
    ctx.lineWidth = it?.thickness ?? 1.5;
    if (state.selection.edges.includes(e.id)) ctx.lineWidth += 2;
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    const geo = e.geometry ?? {};
    if (geo.cx !== undefined && geo.cy !== undefined) {
      ctx.quadraticCurveTo(geo.cx, geo.cy, b.x, b.y);
    } else {
      ctx.lineTo(b.x, b.y);
    }
    ctx.stroke();
    if (isOpenEnd(e.end_b)) {
      ctx.fillStyle = "#9be09b";
      ctx.strokeStyle = "#2c7a2c";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.arc(b.x, b.y, 9, 0, 2 * Math.PI);
      ctx.fill();
      ctx.stroke();
      ctx.fillStyle = "#123312";
      ctx.font = "11px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(String(e.end_b.plaque), b.x, b.y + 4);
    }
  }

  if (state.pendingIndex && cursor) {
    const t = project.tensors.find((x) => x.id === state.pendingIndex!.tensor);
    if (t) {
      const a = anchorPosition(t, state.pendingIndex.anchor);
      ctx.strokeStyle = "#888";
      ctx.setLineDash([4, 4]);
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(cursor.x, cursor.y);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }

  for (const t of project.tensors) {
    const g = t.geometry ?? {};
    const x = g.x ?? 0, y = g.y ?? 0, w = g.w ?? 80, h = g.h ?? 50;
    ctx.globalAlpha = g.opacity ?? 1;
    ctx.fillStyle = g.color ?? "#7fb2e5";
    ctx.strokeStyle = state.selection.tensors.includes(t.id) ? "#d2601a" : "#223344";
    ctx.lineWidth = state.selection.tensors.includes(t.id) ? 3 : 1.5;
    ctx.beginPath();
    if (g.shape === "ellipse") {
      ctx.ellipse(x + w / 2, y + h / 2, w / 2, h / 2, 0, 0, 2 * Math.PI);
    } else {
      ctx.roundRect(x, y, w, h, 6);
    }
    ctx.fill();
    ctx.stroke();
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#10233b";
    ctx.font = "13px sans-serif";
    ctx.textAlign = "center";
    if (t.name) ctx.fillText(t.name, x + w / 2, y + h / 2 + 4);
    if (t.network !== undefined) {
      ctx.font = "10px sans-serif";
      ctx.fillStyle = "#555";
      ctx.textAlign = "right";
      ctx.fillText(`net ${t.network}`, x + w - 3, y + 11);
    }
    for (let k = 1; k <= t.anchor_count; k++) {
      const p = anchorPosition(t, k);
      ctx.fillStyle = "#bcd6f7";
      ctx.strokeStyle = "#3a6ea5";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.roundRect(p.x - 7, p.y - 7, 14, 14, 3);
      ctx.fill();
      ctx.stroke();
      ctx.fillStyle = "#142a47";
      ctx.font = "10px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(String(k), p.x, p.y + 4);
    }
  }
}
