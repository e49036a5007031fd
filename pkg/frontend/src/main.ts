/** Application shell: wires the canvas, toolbar, panels and service calls. */

import { EngineClient, debounce } from "./api.js";
import { hitTest, render } from "./canvas.js";
import {
  AnalysisDoc,
  EditAction,
  EditorState,
  applyEdit,
  initialState,
} from "./editor.js";
import { parseProject, serializeProject } from "./model.js";
import { exportSvg } from "./svg.js";

const $ = <T extends HTMLElement>(sel: string) =>
  document.querySelector(sel) as T;

let state: EditorState = initialState();
const client = new EngineClient("");
let cursor = { x: 0, y: 0 };
let hoveredEdge: number | null = null;
let draggingTensor: { id: number; dx: number; dy: number } | null = null;
let curvingEdge: number | null = null;

const canvas = $("#board") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

function dispatch(action: EditAction) {
  const before = state.project;
  state = applyEdit(state, action);
  refreshChrome();
  draw();
  if (state.project !== before) scheduleAnalysis();
}

function draw() {
  render(state, ctx, cursor);
}

// -- live analysis ----------------------------------------------------------

const scheduleAnalysis = debounce(async () => {
  const dims = collectDimOverrides();
  const mode = ($("#mode") as HTMLSelectElement).value;
  const outcome = await client.analyze(state.project, dims, mode);
  if (outcome.stale) return; // superseded by a newer edit
  if (outcome.offline) {
    $("#offline-banner").style.display = "block";
    state = applyEdit(state, {
      kind: "set_analysis", analysis: state.lastAnalysis, stale: true,
    });
  } else {
    $("#offline-banner").style.display = "none";
    state = applyEdit(state, {
      kind: "set_analysis", analysis: outcome.doc, stale: false,
    });
  }
  renderAnalysisPanel();
}, 250);

function collectDimOverrides(): Record<string, number> | undefined {
  const dims: Record<string, number> = {};
  let any = false;
  for (const it of state.project.index_types) {
    const slider = document.querySelector<HTMLInputElement>(
      `#dim-slider-${it.id}`);
    if (slider && slider.value !== "" && Number(slider.value) !== it.default_dim) {
      dims[it.name] = Number(slider.value);
      any = true;
    }
  }
  return any ? dims : undefined;
}

function renderAnalysisPanel() {
  const panel = $("#analysis");
  const doc: AnalysisDoc | null = state.lastAnalysis;
  panel.innerHTML = "";
  const staleMark = state.analysisStale
    ? `<div class="stale">showing last known analysis</div>` : "";
  if (!doc) {
    panel.innerHTML = staleMark || "<div class='hint'>draw a network and assign it a number</div>";
    return;
  }
  const rows: string[] = [staleMark];
  for (const err of doc.project_errors) {
    rows.push(`<div class="badge invalid">${err.code}</div> ${err.message}`);
  }
  for (const net of doc.networks) {
    if (!net.valid) {
      const errs = net.errors.map(
        (e) => `<li><code>${e.code}</code> ${e.location}: ${e.message}</li>`).join("");
      rows.push(`<section><h3>network ${net.network}
        <span class="badge invalid">invalid</span></h3><ul>${errs}</ul></section>`);
      continue;
    }
    rows.push(`<section><h3>network ${net.network}
      <span class="badge valid">valid</span></h3>
      <dl>
      <dt>tensors</dt><dd>${net.tensor_count} (${net.closed ? "closed" : `${net.open_count} open`})</dd>
      <dt>optimal</dt><dd>${net.guaranteed_optimal ? "guaranteed" : "not guaranteed"}</dd>
      <dt>multiplications</dt><dd>${net.total_mults}</dd>
      <dt>time @3GHz</dt><dd>${net.time_estimate_s?.toExponential(2)} s</dd>
      <dt>order</dt><dd>${net.order?.join(" ") || "(none)"}</dd>
      <dt>top steps</dt><dd>${(net.top_costs ?? []).map(
        (c) => `<span class="badge power">${c}</span>`).join(" ")}</dd>
      ${net.environments_available
        ? `<dt>environments</dt><dd>which_env 1..${net.environment_count}</dd>` : ""}
      </dl></section>`);
  }
  panel.innerHTML = rows.join("\n");

  const big = doc.networks.some((n) => (n.tensor_count ?? 0) > 10);
  $("#mode-wrap").style.display = big ? "inline-block" : "none";
}

// -- toolbar ----------------------------------------------------------------

function refreshChrome() {
  $("#notice").textContent = state.notice ?? "";
  $("#plaque-indicator").textContent = String(state.nextPlaque);
  for (const tool of ["select", "tensor", "index"] as const) {
    $(`#tool-${tool}`).classList.toggle("active", state.tool === tool);
  }
  renderIndexTypeTabs();
}

function renderIndexTypeTabs() {
  const box = $("#index-types");
  box.innerHTML = "";
  for (const it of state.project.index_types) {
    const row = document.createElement("div");
    row.className = "type-row" + (state.activeIndexType === it.id ? " active" : "");
    row.innerHTML = `
      <button class="pick" data-id="${it.id}">${it.name}</button>
      <input class="dim" data-id="${it.id}" type="number" min="1" value="${it.default_dim}" title="default dimension">
      <label class="slider-label">what-if
        <input id="dim-slider-${it.id}" type="range" min="1" max="64" value="${it.default_dim}">
        <span id="dim-value-${it.id}">${it.default_dim}</span>
      </label>`;
    box.appendChild(row);
  }
  box.querySelectorAll<HTMLButtonElement>("button.pick").forEach((b) =>
    b.addEventListener("click", () =>
      dispatch({ kind: "set_active_index_type", id: Number(b.dataset.id) })));
  box.querySelectorAll<HTMLInputElement>("input.dim").forEach((inp) =>
    inp.addEventListener("change", () =>
      dispatch({ kind: "configure_index_type", id: Number(inp.dataset.id),
                 dim: Number(inp.value) })));
  box.querySelectorAll<HTMLInputElement>("input[type=range]").forEach((sl) =>
    sl.addEventListener("input", () => {
      const span = sl.nextElementSibling as HTMLSpanElement;
      span.textContent = sl.value;
      scheduleAnalysis();
    }));
}

function bindToolbar() {
  $("#tool-select").addEventListener("click", () =>
    dispatch({ kind: "set_tool", tool: "select" }));
  $("#tool-tensor").addEventListener("click", () =>
    dispatch({ kind: "set_tool", tool: "tensor" }));
  $("#tool-index").addEventListener("click", () =>
    dispatch({ kind: "set_tool", tool: "index" }));
  $("#undo").addEventListener("click", () => dispatch({ kind: "undo" }));
  $("#redo").addEventListener("click", () => dispatch({ kind: "redo" }));
  $("#delete").addEventListener("click", () =>
    dispatch({ kind: "delete_selection" }));
  ($("#anchor-count") as HTMLInputElement).addEventListener("change", (ev) => {
    const v = Number((ev.target as HTMLInputElement).value);
    if (state.selection.tensors.length === 1) {
      dispatch({ kind: "set_anchor_count", id: state.selection.tensors[0], anchors: v });
    } else {
      dispatch({ kind: "set_tensor_defaults", defaults: { anchors: v } });
    }
  });
  ($("#tensor-name") as HTMLInputElement).addEventListener("change", (ev) => {
    const v = (ev.target as HTMLInputElement).value.trim();
    if (state.selection.tensors.length === 1) {
      dispatch({ kind: "rename_tensor", id: state.selection.tensors[0],
                 name: v === "" ? null : v });
    }
  });
  for (let net = 1; net <= 4; net++) {
    $(`#assign-${net}`).addEventListener("click", () =>
      dispatch({ kind: "assign_network", network: net }));
  }
  $("#assign-none").addEventListener("click", () =>
    dispatch({ kind: "assign_network", network: null }));
  $("#add-type").addEventListener("click", () => {
    const id = state.project.index_types.length + 1;
    dispatch({ kind: "configure_index_type", id, name: `idx${id}`, dim: 2 });
  });
  ($("#mode") as HTMLSelectElement).addEventListener("change", () =>
    scheduleAnalysis());

  $("#export-code").addEventListener("click", async () => {
    const lang = ($("#export-lang") as HTMLSelectElement).value;
    const name = (($("#export-name") as HTMLInputElement).value || "contract_network").trim();
    try {
      const src = await client.exportCode(state.project, lang, name);
      const ext = lang === "python" ? "py" : lang === "matlab" ? "m" : "jl";
      download(`${name}.${ext}`, src, "text/plain");
    } catch (err) {
      state = { ...state, notice: String(err) };
      refreshChrome();
    }
  });
  $("#export-svg").addEventListener("click", () =>
    download("diagram.svg", exportSvg(state.project), "image/svg+xml"));
  $("#download-project").addEventListener("click", () =>
    download("project.tnp", serializeProject(state.project), "application/json"));
  ($("#upload-project") as HTMLInputElement).addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      dispatch({ kind: "load_project", project: parseProject(await file.text()) });
    } catch (err) {
      state = { ...state, notice: `could not load project: ${err}` };
      refreshChrome();
    }
  });
}

function download(name: string, text: string, mime: string) {
  const a = document.createElement("a");
  a.href = URL.createObjectURL(new Blob([text], { type: mime }));
  a.download = name;
  a.click();
  URL.revokeObjectURL(a.href);
}

// -- canvas interactions ------------------------------------------------------

function canvasPos(ev: MouseEvent) {
  const r = canvas.getBoundingClientRect();
  return { x: ev.clientX - r.left, y: ev.clientY - r.top };
}

function bindCanvas() {
  canvas.addEventListener("mousedown", (ev) => {
    const { x, y } = canvasPos(ev);
    const hit = hitTest(state.project, x, y);
    if (state.tool === "tensor") {
      if (hit.kind === "empty") dispatch({ kind: "create_tensor", x: x - 40, y: y - 25 });
      return;
    }
    if (state.tool === "index" || hit.kind === "anchor") {
      if (hit.kind === "anchor") {
        if (state.pendingIndex) dispatch({ kind: "complete_index_anchor", tensor: hit.tensor, anchor: hit.anchor });
        else dispatch({ kind: "start_index", tensor: hit.tensor, anchor: hit.anchor });
        return;
      }
      if (state.pendingIndex && hit.kind === "empty") {
        dispatch({ kind: "complete_index_open", x, y });
        return;
      }
    }
    if (hit.kind === "tensor") {
      const t = state.project.tensors.find((q) => q.id === hit.tensor)!;
      const g = t.geometry ?? {};
      if (ev.shiftKey) {
        dispatch({ kind: "set_selection",
                   tensors: [...state.selection.tensors, hit.tensor],
                   edges: state.selection.edges });
      } else {
        dispatch({ kind: "set_selection", tensors: [hit.tensor], edges: [] });
      }
      draggingTensor = { id: hit.tensor, dx: x - (g.x ?? 0), dy: y - (g.y ?? 0) };
      const nameBox = $("#tensor-name") as HTMLInputElement;
      nameBox.value = t.name ?? "";
      return;
    }
    if (hit.kind === "edge") {
      if (ev.altKey) curvingEdge = hit.edge;
      else dispatch({ kind: "set_selection", tensors: [], edges: [hit.edge] });
      return;
    }
    dispatch({ kind: "set_selection", tensors: [], edges: [] });
  });

  canvas.addEventListener("mousemove", (ev) => {
    cursor = canvasPos(ev);
    const hit = hitTest(state.project, cursor.x, cursor.y);
    hoveredEdge = hit.kind === "plaque" ? hit.edge : null;
    if (draggingTensor) {
      dispatch({ kind: "move_tensor", id: draggingTensor.id,
                 x: cursor.x - draggingTensor.dx, y: cursor.y - draggingTensor.dy });
    } else if (curvingEdge !== null) {
      dispatch({ kind: "curve_index", id: curvingEdge, cx: cursor.x, cy: cursor.y });
    }
    draw();
  });

  canvas.addEventListener("mouseup", () => {
    draggingTensor = null;
    curvingEdge = null;
  });

  window.addEventListener("keydown", (ev) => {
    if (ev.key >= "1" && ev.key <= "9") {
      const plaque = Number(ev.key);
      if (hoveredEdge !== null) {
        dispatch({ kind: "set_plaque", id: hoveredEdge, plaque });
      } else {
        dispatch({ kind: "set_next_plaque", plaque });
      }
    } else if (ev.key === "Escape") {
      dispatch({ kind: "cancel_index" });
    } else if (ev.key === "Delete" || ev.key === "Backspace") {
      if ((ev.target as HTMLElement).tagName !== "INPUT") {
        dispatch({ kind: "delete_selection" });
      }
    } else if ((ev.ctrlKey || ev.metaKey) && ev.key === "z") {
      dispatch({ kind: ev.shiftKey ? "redo" : "undo" });
    }
  });
}

async function boot() {
  bindToolbar();
  bindCanvas();
  refreshChrome();
  draw();
  if (!(await client.health())) {
    $("#offline-banner").style.display = "block";
  }
  scheduleAnalysis();
}

boot();
