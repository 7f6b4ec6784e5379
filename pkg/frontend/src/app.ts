/** Explorer controller: wires the API client, session state, and renderer.
 *
 * All mathematics stays on the server.  The controller issues at most one
 * request at a time, stores every response in the session history, and
 * re-renders views as pure functions of the stored documents.
 */

import { QmutClient, ServiceError, StaleResponseError } from "./api.js";
import {
  canRedo,
  canUndo,
  currentDocument,
  initialState,
  reduce,
} from "./state.js";
import type { Action, SessionState } from "./state.js";
import { buildScene, renderScene } from "./render.js";
import { pipelineSteps } from "./stepper.js";
import type { QuiverDocument } from "./types.js";
import { isGraded } from "./types.js";

export interface ErrorView {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export interface ExplorerApp {
  readonly root: HTMLElement;
  getState(): SessionState;
  /** Resolves once no request is in flight. */
  whenIdle(): Promise<void>;
  loadDocument(doc: QuiverDocument): void;
  clickVertex(id: number): void;
  undo(): void;
  redo(): void;
  generate(
    type: "canonical" | "squid",
    weights: number[],
    as: "graded" | "sequence",
  ): Promise<void>;
  recover(): Promise<void>;
  stepTo(index: number): void;
  lastError(): ErrorView | null;
}

const PANEL_HTML = `
  <div class="toolbar">
    <select data-role="gen-type">
      <option value="canonical">canonical</option>
      <option value="squid">squid</option>
    </select>
    <input data-role="gen-weights" value="3,3,4" size="9" title="weights, e.g. 3,3,4">
    <select data-role="gen-as">
      <option value="graded">graded</option>
      <option value="sequence">sequence</option>
    </select>
    <button data-role="generate">generate</button>
    <span class="divider"></span>
    <button data-role="undo">undo</button>
    <button data-role="redo">redo</button>
    <button data-role="recover">recover</button>
    <span data-role="status" class="status"></span>
  </div>
  <div data-role="error" class="error-panel" hidden></div>
  <div data-role="canvas" class="canvas"></div>
  <div data-role="stepper" class="stepper" hidden>
    <div class="stepper-bar">
      <button data-role="step-prev">&#8592; prev</button>
      <span data-role="step-label" class="step-label"></span>
      <button data-role="step-next">next &#8594;</button>
      <button data-role="step-close">close</button>
    </div>
    <div data-role="step-canvas" class="canvas"></div>
  </div>
`;

const STYLE = `
  .explorer { font: 14px/1.4 system-ui, sans-serif; color: #1c2733; }
  .explorer .toolbar { display: flex; gap: 8px; align-items: center;
    padding: 8px 0; flex-wrap: wrap; }
  .explorer .divider { flex: 0 0 12px; }
  .explorer button { padding: 4px 12px; }
  .explorer button:disabled { opacity: 0.45; }
  .explorer .status { color: #5b6b7b; }
  .explorer .error-panel { background: #fde8e8; border: 1px solid #c53030;
    border-radius: 4px; padding: 8px 12px; margin: 6px 0; font-family: monospace; }
  .explorer .canvas { overflow: auto; }
  .explorer .quiver-scene .edge { stroke: #2d3a48; stroke-width: 1.6; }
  .explorer .quiver-scene .edge.dashed { stroke: #8a4baf; }
  .explorer .quiver-scene #arrowhead path { fill: #2d3a48; }
  .explorer .quiver-scene .vertex-shape { fill: #f4f7fa; stroke: #2d3a48;
    stroke-width: 1.6; }
  .explorer .quiver-scene .vertex[data-clickable="true"] { cursor: pointer; }
  .explorer .quiver-scene .vertex[data-clickable="false"] .vertex-shape {
    stroke-dasharray: 4 3; opacity: 0.75; }
  .explorer .quiver-scene .vertex-label { font: 12px monospace; }
  .explorer .quiver-scene .vertex-badge { font: 11px monospace; fill: #5b6b7b; }
  .explorer .quiver-scene .edge-count { font: 11px monospace; fill: #2d3a48; }
  .explorer .stepper-bar { display: flex; gap: 8px; align-items: center;
    padding: 6px 0; }
  .explorer .step-label { font-family: monospace; }
`;

function roleOf<T extends Element>(root: HTMLElement, role: string): T {
  const node = root.querySelector(`[data-role="${role}"]`);
  if (!node) throw new Error(`missing panel element: ${role}`);
  return node as T;
}

export function mountExplorer(root: HTMLElement, client: QmutClient): ExplorerApp {
  root.classList.add("explorer");
  root.innerHTML = PANEL_HTML;
  if (!document.getElementById("explorer-style")) {
    const style = document.createElement("style");
    style.id = "explorer-style";
    style.textContent = STYLE;
    document.head.appendChild(style);
  }

  const canvas = roleOf<HTMLElement>(root, "canvas");
  const errorPanel = roleOf<HTMLElement>(root, "error");
  const status = roleOf<HTMLElement>(root, "status");
  const stepper = roleOf<HTMLElement>(root, "stepper");
  const stepCanvas = roleOf<HTMLElement>(root, "step-canvas");
  const stepLabel = roleOf<HTMLElement>(root, "step-label");
  const undoButton = roleOf<HTMLButtonElement>(root, "undo");
  const redoButton = roleOf<HTMLButtonElement>(root, "redo");
  const recoverButton = roleOf<HTMLButtonElement>(root, "recover");
  const generateButton = roleOf<HTMLButtonElement>(root, "generate");

  let state: SessionState = initialState();
  let pending = 0;
  let error: ErrorView | null = null;
  let idleWaiters: Array<() => void> = [];

  function settleIfIdle(): void {
    if (pending === 0) {
      for (const resolve of idleWaiters) resolve();
      idleWaiters = [];
    }
  }

  async function track<T>(
    work: Promise<T>,
    onSuccess?: (value: T) => void,
  ): Promise<T | null> {
    pending += 1;
    render();
    try {
      const value = await work;
      error = null;
      // Apply before the pending count drops so whenIdle() callers
      // always observe the updated session.
      onSuccess?.(value);
      return value;
    } catch (failure) {
      if (failure instanceof StaleResponseError) {
        return null; // superseded; the newer request's response wins
      }
      if (failure instanceof ServiceError) {
        error = {
          code: failure.code,
          message: failure.message,
          details: failure.details,
        };
        return null;
      }
      error = {
        code: "network",
        message: failure instanceof Error ? failure.message : String(failure),
        details: {},
      };
      return null;
    } finally {
      pending -= 1;
      render();
      settleIfIdle();
    }
  }

  function dispatch(action: Action): void {
    state = reduce(state, action);
    render();
  }

  function render(): void {
    const doc = currentDocument(state);
    if (doc) {
      renderScene(canvas, buildScene(doc), { onVertexClick: clickVertex });
    } else {
      canvas.replaceChildren();
    }
    undoButton.disabled = pending > 0 || !canUndo(state);
    redoButton.disabled = pending > 0 || !canRedo(state);
    recoverButton.disabled = pending > 0 || doc === null;
    generateButton.disabled = pending > 0;
    status.textContent = pending > 0 ? "working…" : "";

    if (error) {
      errorPanel.hidden = false;
      errorPanel.setAttribute("data-error-code", error.code);
      errorPanel.textContent =
        `${error.code}: ${error.message} ${JSON.stringify(error.details)}`;
    } else {
      errorPanel.hidden = true;
      errorPanel.removeAttribute("data-error-code");
      errorPanel.textContent = "";
    }

    if (state.pipeline) {
      const steps = pipelineSteps(state.pipeline.result);
      const step = steps[Math.min(state.pipeline.stepIndex, steps.length - 1)];
      stepper.hidden = false;
      stepLabel.textContent = step.label;
      stepLabel.setAttribute("data-step-index", String(step.index));
      renderScene(stepCanvas, buildScene(step.document));
    } else {
      stepper.hidden = true;
      stepLabel.textContent = "";
      stepCanvas.replaceChildren();
    }
  }

  function clickVertex(id: number): void {
    const doc = currentDocument(state);
    if (pending > 0 || doc === null || !isGraded(doc)) return;
    const vertex = doc.vertices.find((v) => v.id === id);
    if (!vertex || vertex.tag === "unknown") {
      return; // blocked; the node's tooltip explains why
    }
    void track(client.mutate(doc, id), (response) =>
      dispatch({ type: "apply", document: response.doc, move: response.move }),
    );
  }

  const app: ExplorerApp = {
    root,
    getState: () => state,
    whenIdle: () =>
      pending === 0
        ? Promise.resolve()
        : new Promise((resolve) => idleWaiters.push(resolve)),
    loadDocument: (doc) => {
      error = null;
      dispatch({ type: "load", document: doc });
    },
    clickVertex,
    undo: () => dispatch({ type: "undo" }),
    redo: () => dispatch({ type: "redo" }),
    generate: async (type, weights, as) => {
      if (pending > 0) return;
      await track(client.generate(type, weights, as), (doc) =>
        dispatch({ type: "load", document: doc }),
      );
    },
    recover: async () => {
      const doc = currentDocument(state);
      if (pending > 0 || doc === null) return;
      await track(client.recover(doc), (result) =>
        dispatch({ type: "open-pipeline", result }),
      );
    },
    stepTo: (index) => dispatch({ type: "step-to", index }),
    lastError: () => error,
  };

  roleOf<HTMLButtonElement>(root, "undo").addEventListener("click", app.undo);
  roleOf<HTMLButtonElement>(root, "redo").addEventListener("click", app.redo);
  recoverButton.addEventListener("click", () => void app.recover());
  generateButton.addEventListener("click", () => {
    const type = roleOf<HTMLSelectElement>(root, "gen-type").value as
      | "canonical"
      | "squid";
    const emitAs = roleOf<HTMLSelectElement>(root, "gen-as").value as
      | "graded"
      | "sequence";
    const weights = roleOf<HTMLInputElement>(root, "gen-weights")
      .value.split(",")
      .map((part) => Number.parseInt(part.trim(), 10))
      .filter((w) => Number.isFinite(w));
    void app.generate(type, weights, emitAs);
  });
  roleOf<HTMLButtonElement>(root, "step-prev").addEventListener("click", () => {
    if (state.pipeline) app.stepTo(state.pipeline.stepIndex - 1);
  });
  roleOf<HTMLButtonElement>(root, "step-next").addEventListener("click", () => {
    if (state.pipeline) app.stepTo(state.pipeline.stepIndex + 1);
  });
  roleOf<HTMLButtonElement>(root, "step-close").addEventListener("click", () =>
    dispatch({ type: "close-pipeline" }),
  );

  render();
  return app;
}
