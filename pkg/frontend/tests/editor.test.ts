import { describe, expect, it } from "vitest";

import {
  EditAction,
  applyAll,
  applyEdit,
  initialState,
} from "../src/editor.js";
import { isOpenEnd } from "../src/model.js";

const T = (x = 100, y = 100, anchors = 4): EditAction =>
  ({ kind: "create_tensor", x, y, anchors });

describe("tensor creation and trace edges", () => {
  it("creates a tensor then wires anchors 1-2 into a trace edge", () => {
    let s = applyEdit(initialState(), T());
    expect(s.project.tensors).toHaveLength(1);
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 1 },
      { kind: "complete_index_anchor", tensor: id, anchor: 2 },
    ]);
    expect(s.project.edges).toHaveLength(1);
    const e = s.project.edges[0];
    expect(e.end_a).toEqual({ tensor: id, anchor: 1 });
    expect(e.end_b).toEqual({ tensor: id, anchor: 2 });
    expect(s.pendingIndex).toBeNull();
  });
});

describe("undo and redo", () => {
  it("undo after tensor creation restores the initial project", () => {
    const s0 = initialState();
    const s1 = applyEdit(s0, T());
    const s2 = applyEdit(s1, { kind: "undo" });
    expect(s2.project).toEqual(s0.project);
  });

  it("redo restores the undone edit", () => {
    const s0 = initialState();
    const s1 = applyEdit(s0, T());
    const s3 = applyAll(s1, [{ kind: "undo" }, { kind: "redo" }]);
    expect(s3.project).toEqual(s1.project);
  });

  it("a new edit clears the redo stack", () => {
    let s = applyEdit(initialState(), T());
    s = applyAll(s, [{ kind: "undo" }, T(300, 300, 2)]);
    expect(s.redoStack).toHaveLength(0);
  });
});

describe("rejected completions leave the project unchanged", () => {
  it("rejects starting on a wired anchor", () => {
    let s = applyEdit(initialState(), T());
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 1 },
      { kind: "complete_index_anchor", tensor: id, anchor: 2 },
    ]);
    const before = s.project;
    s = applyEdit(s, { kind: "start_index", tensor: id, anchor: 1 });
    expect(s.project).toBe(before);
    expect(s.notice).toMatch(/already attached/);
  });

  it("rejects completing onto a wired anchor", () => {
    let s = applyAll(initialState(), [T(), T(300, 100, 2)]);
    const [a, b] = s.project.tensors.map((t) => t.id);
    s = applyAll(s, [
      { kind: "start_index", tensor: a, anchor: 1 },
      { kind: "complete_index_anchor", tensor: b, anchor: 1 },
      { kind: "start_index", tensor: a, anchor: 2 },
    ]);
    const before = s.project;
    s = applyEdit(s, { kind: "complete_index_anchor", tensor: b, anchor: 1 });
    expect(s.project).toBe(before);
    expect(s.notice).toMatch(/already attached/);
    expect(s.pendingIndex).not.toBeNull(); // still in progress
  });

  it("rejects ending on the starting anchor", () => {
    let s = applyEdit(initialState(), T());
    const id = s.project.tensors[0].id;
    s = applyEdit(s, { kind: "start_index", tensor: id, anchor: 3 });
    s = applyEdit(s, { kind: "complete_index_anchor", tensor: id, anchor: 3 });
    expect(s.project.edges).toHaveLength(0);
    expect(s.notice).toMatch(/starting anchor/);
  });
});

describe("open indices and plaques", () => {
  it("assigns the pending plaque and advances it", () => {
    let s = applyEdit(initialState(), T());
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 1 },
      { kind: "complete_index_open", x: 400, y: 120 },
    ]);
    const e = s.project.edges[0];
    expect(isOpenEnd(e.end_b) && e.end_b.plaque).toBe(1);
    expect(s.nextPlaque).toBe(2);
  });

  it("relabels open plaques via set_plaque, rejects internal edges", () => {
    let s = applyEdit(initialState(), T());
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 1 },
      { kind: "complete_index_open", x: 400, y: 120 },
      { kind: "set_plaque", id: 1, plaque: 7 },
    ]);
    const e = s.project.edges[0];
    expect(isOpenEnd(e.end_b) && e.end_b.plaque).toBe(7);

    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 2 },
      { kind: "complete_index_anchor", tensor: id, anchor: 3 },
    ]);
    const before = s.project;
    s = applyEdit(s, { kind: "set_plaque", id: 2, plaque: 3 });
    expect(s.project).toBe(before);
    expect(s.notice).toMatch(/open indices/);
  });
});

describe("network assignment and deletion", () => {
  it("assigns selected tensors to a network", () => {
    let s = applyAll(initialState(), [T(), T(300, 100, 2)]);
    const ids = s.project.tensors.map((t) => t.id);
    s = applyEdit(s, { kind: "set_selection", tensors: ids, edges: [] });
    s = applyEdit(s, { kind: "assign_network", network: 2 });
    expect(s.project.tensors.every((t) => t.network === 2)).toBe(true);
    s = applyEdit(s, { kind: "assign_network", network: null });
    expect(s.project.tensors.every((t) => t.network === undefined)).toBe(true);
  });

  it("deleting a tensor removes its incident edges", () => {
    let s = applyAll(initialState(), [T(), T(300, 100, 2)]);
    const [a, b] = s.project.tensors.map((t) => t.id);
    s = applyAll(s, [
      { kind: "start_index", tensor: a, anchor: 1 },
      { kind: "complete_index_anchor", tensor: b, anchor: 1 },
      { kind: "set_selection", tensors: [b], edges: [] },
      { kind: "delete_selection" },
    ]);
    expect(s.project.tensors).toHaveLength(1);
    expect(s.project.edges).toHaveLength(0);
  });
});

describe("anchor count changes", () => {
  it("rejects shrinking below a wired anchor", () => {
    let s = applyEdit(initialState(), T());
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 4 },
      { kind: "complete_index_open", x: 500, y: 100 },
    ]);
    const before = s.project;
    s = applyEdit(s, { kind: "set_anchor_count", id, anchors: 3 });
    expect(s.project).toBe(before);
    expect(s.notice).toMatch(/wired anchor/);
    s = applyEdit(s, { kind: "set_anchor_count", id, anchors: 6 });
    expect(s.project.tensors[0].anchor_count).toBe(6);
  });
});

describe("index types", () => {
  it("caps index types at four", () => {
    let s = initialState();
    for (const id of [2, 3, 4]) {
      s = applyEdit(s, { kind: "configure_index_type", id, name: `t${id}`, dim: 3 });
    }
    expect(s.project.index_types).toHaveLength(4);
    const before = s.project;
    s = applyEdit(s, { kind: "configure_index_type", id: 5, name: "t5", dim: 3 });
    expect(s.project).toBe(before);
    expect(s.notice).toMatch(/1\.\.4/);
  });

  it("new indices take the active type", () => {
    let s = applyAll(initialState(), [
      { kind: "configure_index_type", id: 2, name: "D", dim: 8 },
      { kind: "set_active_index_type", id: 2 },
      T(),
    ]);
    const id = s.project.tensors[0].id;
    s = applyAll(s, [
      { kind: "start_index", tensor: id, anchor: 1 },
      { kind: "complete_index_open", x: 400, y: 100 },
    ]);
    expect(s.project.edges[0].index_type).toBe(2);
  });
});
