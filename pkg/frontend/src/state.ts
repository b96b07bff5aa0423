import type { DecisionAck, DocumentPayload, Verdict } from './types.js';

/**
 * Review state: the server payload plus, per edit, an optional in-flight
 * verdict that has been sent but not yet acknowledged.  The server stays
 * the source of truth; in-flight verdicts render as "saving" and are
 * rolled back if the service refuses them.
 */
export interface EditState {
  verdict: Verdict;
  inflight: Verdict | null;
}

export interface ReviewState {
  doc: DocumentPayload;
  edits: EditState[][];
  cursor: { line: number; edit: number } | null;
}

export function initialState(doc: DocumentPayload): ReviewState {
  const edits = doc.lines.map((line) =>
    line.edits.map((e) => ({ verdict: e.verdict, inflight: null as Verdict | null }))
  );
  return { doc, edits, cursor: firstEdit(doc) };
}

function firstEdit(doc: DocumentPayload): { line: number; edit: number } | null {
  for (const line of doc.lines) {
    if (line.edits.length > 0) return { line: line.index, edit: 0 };
  }
  return null;
}

export function shownVerdict(state: ReviewState, line: number, edit: number): Verdict {
  const cell = state.edits[line]?.[edit];
  if (!cell) throw new Error(`no edit ${line}/${edit}`);
  return cell.inflight ?? cell.verdict;
}

export function isSaving(state: ReviewState, line: number, edit: number): boolean {
  return state.edits[line]?.[edit]?.inflight != null;
}

/** Mark a decision as sent but unacknowledged. */
export function beginDecision(
  state: ReviewState,
  line: number,
  edit: number,
  verdict: Verdict
): ReviewState {
  return mutateEdit(state, line, edit, (cell) => ({ ...cell, inflight: verdict }));
}

/** Commit the acknowledged verdict; the ack payload wins over what was sent. */
export function commitDecision(state: ReviewState, ack: DecisionAck): ReviewState {
  return mutateEdit(state, ack.line, ack.edit, () => ({
    verdict: ack.verdict,
    inflight: null,
  }));
}

/** A decision post failed: restore the last confirmed verdict. */
export function rollbackDecision(
  state: ReviewState,
  line: number,
  edit: number
): ReviewState {
  return mutateEdit(state, line, edit, (cell) => ({ ...cell, inflight: null }));
}

function mutateEdit(
  state: ReviewState,
  line: number,
  edit: number,
  update: (cell: EditState) => EditState
): ReviewState {
  const lineEdits = state.edits[line];
  const cell = lineEdits?.[edit];
  if (!lineEdits || !cell) throw new Error(`no edit ${line}/${edit}`);
  const edits = state.edits.slice();
  edits[line] = lineEdits.slice();
  edits[line]![edit] = update(cell);
  return { ...state, edits };
}

export interface EditRef {
  line: number;
  edit: number;
}

function allEdits(state: ReviewState): EditRef[] {
  const refs: EditRef[] = [];
  state.doc.lines.forEach((line) => {
    line.edits.forEach((e) => refs.push({ line: line.index, edit: e.index }));
  });
  return refs;
}

/** Cursor movement for keyboard-driven sequential review. */
export function moveCursor(state: ReviewState, delta: 1 | -1): ReviewState {
  const refs = allEdits(state);
  if (refs.length === 0) return state;
  const current = state.cursor;
  let idx = current
    ? refs.findIndex((r) => r.line === current.line && r.edit === current.edit)
    : -1;
  idx = idx === -1 ? 0 : (idx + delta + refs.length) % refs.length;
  const next = refs[idx]!;
  return { ...state, cursor: next };
}

export function localStats(state: ReviewState) {
  let accepted = 0;
  let rejected = 0;
  let pending = 0;
  for (const line of state.edits) {
    for (const cell of line) {
      const v = cell.inflight ?? cell.verdict;
      if (v === 'accepted') accepted += 1;
      else if (v === 'rejected') rejected += 1;
      else pending += 1;
    }
  }
  const total = accepted + rejected + pending;
  return {
    total,
    accepted,
    rejected,
    pending,
    decidedFraction: total === 0 ? 1 : (accepted + rejected) / total,
  };
}
