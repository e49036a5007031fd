/** Project document types mirroring the engine's .tnp schema. */

export interface IndexTypeDoc {
  id: number;
  name: string;
  default_dim: number;
  color?: [number, number, number];
  thickness?: number;
  [k: string]: unknown;
}

export interface TensorGeometry {
  x?: number;
  y?: number;
  w?: number;
  h?: number;
  shape?: "rect" | "ellipse";
  color?: string;
  opacity?: number;
  [k: string]: unknown;
}

export interface TensorDoc {
  id: number;
  anchor_count: number;
  name?: string;
  network?: number;
  geometry?: TensorGeometry;
  [k: string]: unknown;
}

export interface AnchorRefDoc {
  tensor: number;
  anchor: number;
}

export interface OpenEndDoc {
  plaque: number;
  geometry?: { x?: number; y?: number; [k: string]: unknown };
}

export type EdgeEnd = AnchorRefDoc | OpenEndDoc;

export interface EdgeDoc {
  id: number;
  index_type: number;
  dim_override?: number;
  end_a: AnchorRefDoc;
  end_b: EdgeEnd;
  geometry?: { cx?: number; cy?: number; [k: string]: unknown };
  [k: string]: unknown;
}

export interface ProjectDoc {
  format_version: number;
  index_types: IndexTypeDoc[];
  tensors: TensorDoc[];
  edges: EdgeDoc[];
  [k: string]: unknown;
}

export const MAX_INDEX_TYPES = 4;
export const MAX_NETWORKS = 4;
export const MAX_PLAQUE = 9;

export function isOpenEnd(end: EdgeEnd): end is OpenEndDoc {
  return (end as OpenEndDoc).plaque !== undefined;
}

export function emptyProject(): ProjectDoc {
  return {
    format_version: 1,
    index_types: [
      { id: 1, name: "chi", default_dim: 2, color: [40, 90, 200], thickness: 1.5 },
    ],
    tensors: [],
    edges: [],
  };
}

export function cloneProject(p: ProjectDoc): ProjectDoc {
  return structuredClone(p);
}

export function nextId(items: { id: number }[]): number {
  return items.reduce((m, it) => Math.max(m, it.id), 0) + 1;
}

export function tensorById(p: ProjectDoc, id: number): TensorDoc | undefined {
  return p.tensors.find((t) => t.id === id);
}

export function edgeById(p: ProjectDoc, id: number): EdgeDoc | undefined {
  return p.edges.find((e) => e.id === id);
}

/** Count of edge ends attached to each anchor, keyed "tensor:anchor". */
export function anchorOccupancy(p: ProjectDoc): Map<string, number> {
  const occ = new Map<string, number>();
  const bump = (ref: AnchorRefDoc) => {
    const key = `${ref.tensor}:${ref.anchor}`;
    occ.set(key, (occ.get(key) ?? 0) + 1);
  };
  for (const e of p.edges) {
    bump(e.end_a);
    if (!isOpenEnd(e.end_b)) bump(e.end_b);
  }
  return occ;
}

export function anchorFree(p: ProjectDoc, tensor: number, anchor: number): boolean {
  return (anchorOccupancy(p).get(`${tensor}:${anchor}`) ?? 0) === 0;
}

export function serializeProject(p: ProjectDoc): string {
  return JSON.stringify(p, null, 2) + "\n";
}

export function parseProject(text: string): ProjectDoc {
  const doc = JSON.parse(text);
  if (
    typeof doc !== "object" || doc === null ||
    !Array.isArray(doc.index_types) || !Array.isArray(doc.tensors) ||
    !Array.isArray(doc.edges)
  ) {
    throw new Error("not a project document");
  }
  return doc as ProjectDoc;
}

/** Anchor position on the tensor boundary; shared by canvas and SVG export. */
export function anchorPosition(
  t: TensorDoc,
  anchor: number,
): { x: number; y: number } {
  const g = t.geometry ?? {};
  const x = g.x ?? 0;
  const y = g.y ?? 0;
  const w = g.w ?? 80;
  const h = g.h ?? 50;
  const theta = -Math.PI / 2 + (2 * Math.PI * (anchor - 1)) / t.anchor_count;
  return {
    x: x + (w / 2) * (1 + 0.92 * Math.cos(theta)),
    y: y + (h / 2) * (1 + 0.92 * Math.sin(theta)),
  };
}

export function edgeEndPosition(p: ProjectDoc, end: EdgeEnd): { x: number; y: number } {
  if (isOpenEnd(end)) {
    return { x: end.geometry?.x ?? 0, y: end.geometry?.y ?? 0 };
  }
  const t = tensorById(p, end.tensor);
  if (!t) return { x: 0, y: 0 };
  return anchorPosition(t, end.anchor);
}
