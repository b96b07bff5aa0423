import type { DocumentPayload, EditView } from './types.js';

function edit(partial: Partial<EditView> & Pick<EditView, 'index' | 'original' | 'replacement' | 'corrected_span'>): EditView {
  return {
    token_index: partial.index,
    kind: 'confusion',
    verdict: 'pending',
    ppl_before: 20,
    ppl_after: 10,
    raw_span: [0, 1],
    ...partial,
  } as EditView;
}

/** Mirrors the service payload for the classic three-edit line. */
export function sampleDocument(): DocumentPayload {
  const corrected = 'so desire ; and on his Refutal, the said';
  return {
    id: 'sample',
    lines: [
      {
        index: 0,
        raw: 'clean line with nothing to review',
        corrected: 'clean line with nothing to review',
        edits: [],
      },
      {
        index: 1,
        raw: 'fo defire ; and on his Refutal, the faid',
        corrected,
        edits: [
          edit({ index: 0, original: 'fo', replacement: 'so', corrected_span: [0, 2] }),
          edit({
            index: 1,
            original: 'defire',
            replacement: 'desire',
            corrected_span: [3, 9],
            kind: 'similarity',
          }),
          edit({
            index: 2,
            original: 'faid',
            replacement: 'said',
            corrected_span: [36, 40],
          }),
        ],
      },
      {
        index: 2,
        raw: 'the timeas end',
        corrected: 'the time as end',
        edits: [
          edit({
            index: 0,
            original: 'timeas',
            replacement: 'time as',
            corrected_span: [4, 11],
            kind: 'split',
          }),
        ],
      },
    ],
  };
}
