/**
 * Editor state and the pure edit reducer.
 *
 * Every committed edit yields a schema-valid project document; invalid
 * completions (for example closing an index onto an anchor that is already
 * wired) leave the project untouched and surface a notice instead.  Edits
 * that change the project snapshot it onto the undo stack, so undo is exact.
 * The editor computes nothing network-theoretic itself: validity verdicts
 * and costs always come from the analysis service.
 */

import {
  MAX_INDEX_TYPES,
  MAX_NETWORKS,
  MAX_PLAQUE,
  ProjectDoc,
  TensorGeometry,
  anchorFree,
  cloneProject,
  edgeById,
  emptyProject,
  isOpenEnd,
  nextId,
  tensorById,
} from "./model.js";

export interface AnalysisNetworkDoc {
  network: number;
  valid: boolean;
  errors: { code: string; location: string; message: string }[];
  tensor_count: number | null;
  tensor_names: string[] | null;
  open_count: number | null;
  closed: boolean | null;
  guaranteed_optimal: boolean | null;
  total_mults: string | null;
  time_estimate_s: number | null;
  order: number[] | null;
  top_costs: string[] | null;
  environments_available: boolean;
  environment_count: number;
}

export interface AnalysisDoc {
  schema_version: number;
  mode: string;
  project_errors: { code: string; location: string; message: string }[];
  networks: AnalysisNetworkDoc[];
}

export type Tool = "select" | "tensor" | "index";

export interface EditorState {
  project: ProjectDoc;
  selection: { tensors: number[]; edges: number[] };
  tool: Tool;
  activeIndexType: number;
  nextPlaque: number;
  pendingIndex: { tensor: number; anchor: number } | null;
  undoStack: ProjectDoc[];
  redoStack: ProjectDoc[];
  notice: string | null;
  lastAnalysis: AnalysisDoc | null;
  analysisStale: boolean;
  tensorDefaults: { anchors: number; shape: "rect" | "ellipse"; color: string; opacity: number };
}

export type EditAction =
  | { kind: "create_tensor"; x: number; y: number; anchors?: number; name?: string }
  | { kind: "move_tensor"; id: number; x: number; y: number }
  | { kind: "rename_tensor"; id: number; name: string | null }
  | { kind: "set_anchor_count"; id: number; anchors: number }
  | { kind: "restyle_tensor"; id: number; style: Partial<TensorGeometry> }
  | { kind: "start_index"; tensor: number; anchor: number }
  | { kind: "complete_index_anchor"; tensor: number; anchor: number }
  | { kind: "complete_index_open"; x: number; y: number }
  | { kind: "cancel_index" }
  | { kind: "curve_index"; id: number; cx: number; cy: number }
  | { kind: "delete_edge"; id: number }
  | { kind: "set_plaque"; id: number; plaque: number }
  | { kind: "set_edge_type"; id: number; typeId: number }
  | { kind: "configure_index_type"; id: number; name?: string; dim?: number; color?: [number, number, number]; thickness?: number }
  | { kind: "set_active_index_type"; id: number }
  | { kind: "set_next_plaque"; plaque: number }
  | { kind: "assign_network"; network: number | null }
  | { kind: "delete_selection" }
  | { kind: "set_selection"; tensors: number[]; edges: number[] }
  | { kind: "set_tool"; tool: Tool }
  | { kind: "set_tensor_defaults"; defaults: Partial<EditorState["tensorDefaults"]> }
  | { kind: "load_project"; project: ProjectDoc }
  | { kind: "set_analysis"; analysis: AnalysisDoc | null; stale?: boolean }
  | { kind: "undo" }
  | { kind: "redo" };

export function initialState(): EditorState {
  return {
    project: emptyProject(),
    selection: { tensors: [], edges: [] },
    tool: "select",
    activeIndexType: 1,
    nextPlaque: 1,
    pendingIndex: null,
    undoStack: [],
    redoStack: [],
    notice: null,
    lastAnalysis: null,
    analysisStale: false,
    tensorDefaults: { anchors: 3, shape: "rect", color: "#7fb2e5", opacity: 1 },
  };
}

function reject(state: EditorState, notice: string): EditorState {
  return { ...state, notice };
}

function commit(state: EditorState, project: ProjectDoc,
                patch: Partial<EditorState> = {}): EditorState {
  return {
    ...state,
    project,
    undoStack: [...state.undoStack, state.project],
    redoStack: [],
    notice: null,
    analysisStale: true,
    ...patch,
  };
}

export function applyEdit(state: EditorState, action: EditAction): EditorState {
  switch (action.kind) {
    case "create_tensor": {
      const anchors = action.anchors ?? state.tensorDefaults.anchors;
      if (anchors < 1) return reject(state, "a tensor needs at least one anchor");
      const p = cloneProject(state.project);
      const t = {
        id: nextId(p.tensors),
        anchor_count: anchors,
        geometry: {
          x: action.x, y: action.y, w: 80, h: 50,
          shape: state.tensorDefaults.shape,
          color: state.tensorDefaults.color,
          opacity: state.tensorDefaults.opacity,
        },
      } as ProjectDoc["tensors"][number];
      if (action.name) t.name = action.name;
      p.tensors.push(t);
      return commit(state, p, { selection: { tensors: [t.id], edges: [] } });
    }

    case "move_tensor": {
      const p = cloneProject(state.project);
      const t = tensorById(p, action.id);
      if (!t) return reject(state, `no tensor ${action.id}`);
      t.geometry = { ...(t.geometry ?? {}), x: action.x, y: action.y };
      return commit(state, p);
    }

    case "rename_tensor": {
      const p = cloneProject(state.project);
      const t = tensorById(p, action.id);
      if (!t) return reject(state, `no tensor ${action.id}`);
      if (action.name === null) delete t.name;
      else t.name = action.name;
      return commit(state, p);
    }

    case "set_anchor_count": {
      if (action.anchors < 1) return reject(state, "anchor count must be at least 1");
      const p = cloneProject(state.project);
      const t = tensorById(p, action.id);
      if (!t) return reject(state, `no tensor ${action.id}`);
      const wired = p.edges.some((e) => {
        const ends = [e.end_a, ...(isOpenEnd(e.end_b) ? [] : [e.end_b])];
        return ends.some((r) => r.tensor === action.id && r.anchor > action.anchors);
      });
      if (wired) {
        return reject(state,
          "cannot reduce the anchor count below a wired anchor; delete its indices first");
      }
      t.anchor_count = action.anchors;
      return commit(state, p);
    }

    case "restyle_tensor": {
      const p = cloneProject(state.project);
      const t = tensorById(p, action.id);
      if (!t) return reject(state, `no tensor ${action.id}`);
      t.geometry = { ...(t.geometry ?? {}), ...action.style };
      return commit(state, p);
    }

    case "start_index": {
      const t = tensorById(state.project, action.tensor);
      if (!t || action.anchor < 1 || action.anchor > t.anchor_count) {
        return reject(state, "no such anchor");
      }
      if (!anchorFree(state.project, action.tensor, action.anchor)) {
        return reject(state, "an index is already attached to this anchor");
      }
      return { ...state, pendingIndex: { tensor: action.tensor, anchor: action.anchor }, notice: null };
    }

    case "complete_index_anchor": {
      const pending = state.pendingIndex;
      if (!pending) return reject(state, "no index in progress");
      const t = tensorById(state.project, action.tensor);
      if (!t || action.anchor < 1 || action.anchor > t.anchor_count) {
        return reject(state, "no such anchor");
      }
      if (pending.tensor === action.tensor && pending.anchor === action.anchor) {
        return reject(state, "an index cannot end on its own starting anchor");
      }
      if (!anchorFree(state.project, action.tensor, action.anchor)) {
        return reject(state, "an index is already attached to this anchor");
      }
      const p = cloneProject(state.project);
      p.edges.push({
        id: nextId(p.edges),
        index_type: state.activeIndexType,
        end_a: { tensor: pending.tensor, anchor: pending.anchor },
        end_b: { tensor: action.tensor, anchor: action.anchor },
      });
      return commit(state, p, { pendingIndex: null });
    }

    case "complete_index_open": {
      const pending = state.pendingIndex;
      if (!pending) return reject(state, "no index in progress");
      const p = cloneProject(state.project);
      p.edges.push({
        id: nextId(p.edges),
        index_type: state.activeIndexType,
        end_a: { tensor: pending.tensor, anchor: pending.anchor },
        end_b: { plaque: state.nextPlaque, geometry: { x: action.x, y: action.y } },
      });
      const advanced = (state.nextPlaque % MAX_PLAQUE) + 1;
      return commit(state, p, { pendingIndex: null, nextPlaque: advanced });
    }

    case "cancel_index":
      return { ...state, pendingIndex: null, notice: null };

    case "curve_index": {
      const p = cloneProject(state.project);
      const e = edgeById(p, action.id);
      if (!e) return reject(state, `no index ${action.id}`);
      e.geometry = { ...(e.geometry ?? {}), cx: action.cx, cy: action.cy };
      return commit(state, p);
    }

    case "delete_edge": {
      const p = cloneProject(state.project);
      const before = p.edges.length;
      p.edges = p.edges.filter((e) => e.id !== action.id);
      if (p.edges.length === before) return reject(state, `no index ${action.id}`);
      return commit(state, p);
    }

    case "set_plaque": {
      if (action.plaque < 1 || action.plaque > MAX_PLAQUE) {
        return reject(state, `plaque labels run 1..${MAX_PLAQUE}`);
      }
      const p = cloneProject(state.project);
      const e = edgeById(p, action.id);
      if (!e) return reject(state, `no index ${action.id}`);
      if (!isOpenEnd(e.end_b)) {
        return reject(state, "only open indices carry plaque labels");
      }
      e.end_b = { ...e.end_b, plaque: action.plaque };
      return commit(state, p);
    }

    case "set_edge_type": {
      const p = cloneProject(state.project);
      const e = edgeById(p, action.id);
      if (!e) return reject(state, `no index ${action.id}`);
      if (!p.index_types.some((it) => it.id === action.typeId)) {
        return reject(state, `no index type ${action.typeId}`);
      }
      e.index_type = action.typeId;
      return commit(state, p);
    }

    case "configure_index_type": {
      if (action.id < 1 || action.id > MAX_INDEX_TYPES) {
        return reject(state, `index type ids run 1..${MAX_INDEX_TYPES}`);
      }
      if (action.dim !== undefined && action.dim < 1) {
        return reject(state, "dimensions must be at least 1");
      }
      const p = cloneProject(state.project);
      let it = p.index_types.find((x) => x.id === action.id);
      if (!it) {
        it = { id: action.id, name: `idx${action.id}`, default_dim: 2 };
        p.index_types.push(it);
        p.index_types.sort((a, b) => a.id - b.id);
      }
      if (action.name !== undefined) it.name = action.name;
      if (action.dim !== undefined) it.default_dim = action.dim;
      if (action.color !== undefined) it.color = action.color;
      if (action.thickness !== undefined) it.thickness = action.thickness;
      return commit(state, p);
    }

    case "set_active_index_type": {
      if (!state.project.index_types.some((it) => it.id === action.id)) {
        return reject(state, `no index type ${action.id}`);
      }
      return { ...state, activeIndexType: action.id, notice: null };
    }

    case "set_next_plaque": {
      if (action.plaque < 1 || action.plaque > MAX_PLAQUE) {
        return reject(state, `plaque labels run 1..${MAX_PLAQUE}`);
      }
      return { ...state, nextPlaque: action.plaque, notice: null };
    }

    case "assign_network": {
      if (action.network !== null &&
          (action.network < 1 || action.network > MAX_NETWORKS)) {
        return reject(state, `network numbers run 1..${MAX_NETWORKS}`);
      }
      if (!state.selection.tensors.length) {
        return reject(state, "select the tensors to assign first");
      }
      const p = cloneProject(state.project);
      for (const id of state.selection.tensors) {
        const t = tensorById(p, id);
        if (!t) continue;
        if (action.network === null) delete t.network;
        else t.network = action.network;
      }
      return commit(state, p);
    }

    case "delete_selection": {
      if (!state.selection.tensors.length && !state.selection.edges.length) {
        return reject(state, "nothing selected");
      }
      const p = cloneProject(state.project);
      const goneTensors = new Set(state.selection.tensors);
      const goneEdges = new Set(state.selection.edges);
      p.tensors = p.tensors.filter((t) => !goneTensors.has(t.id));
      p.edges = p.edges.filter((e) => {
        if (goneEdges.has(e.id)) return false;
        if (goneTensors.has(e.end_a.tensor)) return false;
        if (!isOpenEnd(e.end_b) && goneTensors.has(e.end_b.tensor)) return false;
        return true;
      });
      return commit(state, p, { selection: { tensors: [], edges: [] } });
    }

    case "set_selection":
      return { ...state, selection: { tensors: [...action.tensors], edges: [...action.edges] }, notice: null };

    case "set_tool":
      return { ...state, tool: action.tool, pendingIndex: null, notice: null };

    case "set_tensor_defaults":
      return { ...state, tensorDefaults: { ...state.tensorDefaults, ...action.defaults }, notice: null };

    case "load_project":
      return commit(state, cloneProject(action.project),
                    { selection: { tensors: [], edges: [] }, pendingIndex: null });

    case "set_analysis":
      return { ...state, lastAnalysis: action.analysis, analysisStale: action.stale ?? false };

    case "undo": {
      if (!state.undoStack.length) return reject(state, "nothing to undo");
      const prev = state.undoStack[state.undoStack.length - 1];
      return {
        ...state,
        project: prev,
        undoStack: state.undoStack.slice(0, -1),
        redoStack: [...state.redoStack, state.project],
        pendingIndex: null,
        notice: null,
        analysisStale: true,
      };
    }

    case "redo": {
      if (!state.redoStack.length) return reject(state, "nothing to redo");
      const next = state.redoStack[state.redoStack.length - 1];
      return {
        ...state,
        project: next,
        redoStack: state.redoStack.slice(0, -1),
        undoStack: [...state.undoStack, state.project],
        pendingIndex: null,
        notice: null,
        analysisStale: true,
      };
    }
  }
}

/** Convenience for scripted sessions and tests. */
export function applyAll(state: EditorState, actions: EditAction[]): EditorState {
  return actions.reduce(applyEdit, state);
}
