export type Verdict = 'pending' | 'accepted' | 'rejected';

export type EditKind = 'confusion' | 'split' | 'similarity' | null;

export interface EditView {
  index: number;
  token_index: number;
  original: string;
  replacement: string;
  kind: EditKind;
  verdict: Verdict;
  ppl_before: number | null;
  ppl_after: number | null;
  raw_span: [number, number];
  corrected_span: [number, number];
}

export interface LineView {
  index: number;
  raw: string;
  corrected: string;
  edits: EditView[];
}

export interface DocumentPayload {
  id: string;
  lines: LineView[];
}

export interface StatsPayload {
  lines: number;
  edits_total: number;
  accepted: number;
  rejected: number;
  pending: number;
  decided_fraction: number;
}

export interface DecisionAck {
  line: number;
  edit: number;
  verdict: Verdict;
  decided_at: number | null;
}
