import type { EditView, LineView } from './types.js';

/**
 * A corrected line sliced into plain text and edit segments.  Segments are
 * built strictly from the character spans the service reports, so the
 * highlighted regions cover exactly the replacement positions and the
 * concatenation of all segment texts reproduces the corrected line.
 */
export interface Segment {
  text: string;
  edit: EditView | null;
}

export function lineSegments(line: LineView): Segment[] {
  const ordered = [...line.edits].sort(
    (a, b) => a.corrected_span[0] - b.corrected_span[0]
  );
  const segments: Segment[] = [];
  let pos = 0;
  for (const edit of ordered) {
    const [start, end] = edit.corrected_span;
    if (start < pos || end > line.corrected.length || end < start) {
      throw new Error(
        `edit span ${start}..${end} out of order for line ${line.index}`
      );
    }
    if (start > pos) {
      segments.push({ text: line.corrected.slice(pos, start), edit: null });
    }
    segments.push({ text: line.corrected.slice(start, end), edit });
    pos = end;
  }
  if (pos < line.corrected.length) {
    segments.push({ text: line.corrected.slice(pos), edit: null });
  }
  return segments;
}
