/** JSON document types of the qmut/1 interchange schema. */

export const SCHEMA = "qmut/1";

export type Tag = "sink" | "source" | "unknown";

export interface GradedVertex {
  id: number;
  label: string;
  rank: number | null;
  tag: Tag;
}

export interface GradedArrow {
  from: number;
  to: number;
  degree: 0 | 1;
  count: number;
}

export interface GradedDocument {
  schema: typeof SCHEMA;
  kind: "graded_quiver";
  vertices: GradedVertex[];
  arrows: GradedArrow[];
  meta: Record<string, unknown>;
}

/** Formal label of a sequence object: an atom or a mutation applied to one. */
export type TermJson = string | { op: "L" | "R"; by: TermJson; arg: TermJson };

export interface SequenceVertex {
  id: number;
  label: TermJson;
  rank: number;
  tag: null;
}

export interface SequenceEntry {
  i: number;
  j: number;
  a: number;
}

export interface SequenceDocument {
  schema: typeof SCHEMA;
  kind: "exc_sequence";
  vertices: SequenceVertex[];
  entries: SequenceEntry[];
  meta: Record<string, unknown>;
}

export type QuiverDocument = GradedDocument | SequenceDocument;

export type MoveKind = "T" | "E" | "M" | "X";

export interface SeqMove {
  side: "L" | "R";
  pos: number;
  kind: MoveKind;
}

export interface MutationWordDocument {
  schema: typeof SCHEMA;
  kind: "mutation_word";
  moves: SeqMove[];
  meta: Record<string, unknown>;
}

/** Metadata the service attaches to a graded mutation response. */
export interface GradedMove {
  vertex: number;
  pre_tag?: Tag;
  pre_rank?: number | null;
  pre_label?: string;
  fz?: boolean;
}

export type AnyMove = GradedMove | SeqMove;

export interface LogEntryJson {
  step: number;
  phase: number;
  move: SeqMove;
  ranks: number[];
}

export interface SquidJson {
  bundle_positions: number[];
  arms: number[][];
  weights: number[];
}

export interface RecoveryResultJson {
  schema: typeof SCHEMA;
  kind: "recovery_result";
  weights: number[];
  squid: SquidJson;
  word: MutationWordDocument;
  reconstruction: TermJson[];
  log: LogEntryJson[];
  initial: SequenceDocument;
  final: SequenceDocument;
  states: SequenceDocument[];
  states_truncated: boolean;
  meta: Record<string, unknown>;
}

export interface ErrorJson {
  error: {
    code: string;
    message: string;
    details: Record<string, unknown>;
  };
}

export function isGraded(doc: QuiverDocument): doc is GradedDocument {
  return doc.kind === "graded_quiver";
}

export function isSequence(doc: QuiverDocument): doc is SequenceDocument {
  return doc.kind === "exc_sequence";
}

/** Short printable form of a formal term, with mutation operators spelled out. */
export function termText(term: TermJson): string {
  if (typeof term === "string") return term;
  return `${term.op}[${termText(term.by)}](${termText(term.arg)})`;
}
