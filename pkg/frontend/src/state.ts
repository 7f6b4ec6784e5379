/** Session state: a cursor over stored server responses.
 *
 * The reducer never computes mutations itself — every document in the
 * history arrived from the service, and undo/redo only move the cursor
 * over those stored snapshots.  Replaying the history from its first
 * entry therefore reproduces the current document exactly.
 */

import type { AnyMove, QuiverDocument, RecoveryResultJson } from "./types.js";
import { stepCount } from "./stepper.js";

export interface HistoryEntry {
  /** Document as the server returned it. */
  document: QuiverDocument;
  /** Move that produced it; null for the entry a document was loaded into. */
  move: AnyMove | null;
}

export interface PipelineView {
  result: RecoveryResultJson;
  stepIndex: number;
}

export interface SessionState {
  history: HistoryEntry[];
  /** Index into history of the document on display; -1 when empty. */
  cursor: number;
  pipeline: PipelineView | null;
}

export type Action =
  | { type: "load"; document: QuiverDocument }
  | { type: "apply"; document: QuiverDocument; move: AnyMove }
  | { type: "undo" }
  | { type: "redo" }
  | { type: "open-pipeline"; result: RecoveryResultJson }
  | { type: "step-to"; index: number }
  | { type: "close-pipeline" };

export function initialState(): SessionState {
  return { history: [], cursor: -1, pipeline: null };
}

export function currentDocument(state: SessionState): QuiverDocument | null {
  return state.cursor >= 0 ? state.history[state.cursor].document : null;
}

export function canUndo(state: SessionState): boolean {
  return state.cursor > 0;
}

export function canRedo(state: SessionState): boolean {
  return state.cursor >= 0 && state.cursor < state.history.length - 1;
}

function clampStep(result: RecoveryResultJson, index: number): number {
  const last = stepCount(result) - 1;
  return Math.max(0, Math.min(index, Math.max(last, 0)));
}

export function reduce(state: SessionState, action: Action): SessionState {
  switch (action.type) {
    case "load":
      return {
        history: [{ document: action.document, move: null }],
        cursor: 0,
        pipeline: null,
      };
    case "apply": {
      // A new move discards any redo tail beyond the cursor.
      const history = state.history.slice(0, state.cursor + 1);
      history.push({ document: action.document, move: action.move });
      return { ...state, history, cursor: history.length - 1 };
    }
    case "undo":
      return canUndo(state) ? { ...state, cursor: state.cursor - 1 } : state;
    case "redo":
      return canRedo(state) ? { ...state, cursor: state.cursor + 1 } : state;
    case "open-pipeline":
      return {
        ...state,
        pipeline: { result: action.result, stepIndex: 0 },
      };
    case "step-to":
      if (!state.pipeline) return state;
      return {
        ...state,
        pipeline: {
          ...state.pipeline,
          stepIndex: clampStep(state.pipeline.result, action.index),
        },
      };
    case "close-pipeline":
      return { ...state, pipeline: null };
  }
}
