/** Pipeline stepper view-model: recovery response → labelled steps.
 *
 * Step 0 is the input sequence; each later step is the state after one
 * recorded move, annotated with the phase that produced it.  The step
 * holding the terminal state is labelled "squid recognized" together
 * with the weights that were read off.
 */

import type { RecoveryResultJson, SequenceDocument } from "./types.js";

export const PHASE_LABELS: Record<number, string> = {
  1: "phase 1 · drive a line bundle to the front",
  2: "phase 2 · shrink morphism counts",
  3: "phase 3 · clear extensions",
  4: "phase 4 · split off source objects",
};

export interface PipelineStep {
  index: number;
  label: string;
  document: SequenceDocument;
  /** Move number this state follows; 0 for the input state. */
  moveNumber: number;
}

export function squidLabel(result: RecoveryResultJson): string {
  return `squid recognized · weights (${result.weights.join(", ")})`;
}

/** Number of steps pipelineSteps() will produce for this result. */
export function stepCount(result: RecoveryResultJson): number {
  return result.states.length + (result.states_truncated ? 1 : 0);
}

export function pipelineSteps(result: RecoveryResultJson): PipelineStep[] {
  const steps: PipelineStep[] = result.states.map((document, index) => {
    if (index === 0) {
      return { index, label: "input sequence", document, moveNumber: 0 };
    }
    const entry = result.log[index - 1];
    const phase = entry ? PHASE_LABELS[entry.phase] ?? `phase ${entry.phase}` : "";
    return {
      index,
      label: `move ${index}/${result.word.moves.length} · ${phase}`,
      document,
      moveNumber: index,
    };
  });
  if (result.states_truncated) {
    // The snapshot list was capped; the terminal state still arrives in
    // `final`, so the stepper can always end on the recognized squid.
    steps.push({
      index: steps.length,
      label: squidLabel(result) + " · intermediate states truncated",
      document: result.final,
      moveNumber: result.word.moves.length,
    });
  } else if (steps.length > 0) {
    const last = steps[steps.length - 1];
    last.label =
      last.moveNumber === 0
        ? squidLabel(result)
        : `move ${last.moveNumber}/${result.word.moves.length} · ${squidLabel(result)}`;
  }
  return steps;
}
