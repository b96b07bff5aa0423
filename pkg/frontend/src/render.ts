import { lineSegments } from './spans.js';
import type { ReviewState } from './state.js';
import { isSaving, shownVerdict } from './state.js';
import type { LineView, Verdict } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function verdictClass(verdict: Verdict, saving: boolean): string {
  return `edit verdict-${verdict}${saving ? ' saving' : ''}`;
}

/** One line row: raw text, corrected text with highlighted edit spans,
 *  and accept/reject controls per edit.  Pure string building so it can be
 *  unit-tested without a DOM. */
export function renderLine(state: ReviewState, line: LineView): string {
  const cursor = state.cursor;
  const parts: string[] = [];
  parts.push(`<div class="line" data-line="${line.index}">`);
  parts.push(`<div class="line-no">${line.index + 1}</div>`);
  parts.push(`<div class="line-body">`);
  parts.push(`<div class="raw">${escapeHtml(line.raw)}</div>`);
  parts.push(`<div class="corrected">`);
  for (const seg of lineSegments(line)) {
    if (seg.edit === null) {
      parts.push(escapeHtml(seg.text));
    } else {
      const e = seg.edit;
      const verdict = shownVerdict(state, line.index, e.index);
      const saving = isSaving(state, line.index, e.index);
      const active =
        cursor && cursor.line === line.index && cursor.edit === e.index;
      const kind = e.kind ?? 'unknown';
      parts.push(
        `<span class="${verdictClass(verdict, saving)} kind-${kind}` +
          `${active ? ' active' : ''}" data-line="${line.index}" ` +
          `data-edit="${e.index}" title="${escapeHtml(e.original)} → ` +
          `${escapeHtml(e.replacement)} (${kind})">${escapeHtml(seg.text)}</span>`
      );
    }
  }
  parts.push(`</div>`);
  if (line.edits.length > 0) {
    parts.push(`<div class="controls">`);
    for (const e of line.edits) {
      const verdict = shownVerdict(state, line.index, e.index);
      parts.push(
        `<span class="control" data-line="${line.index}" data-edit="${e.index}">` +
          `<span class="pair">${escapeHtml(e.original)} → ` +
          `${escapeHtml(e.replacement)}</span>` +
          button('accept', line.index, e.index, verdict === 'accepted') +
          button('reject', line.index, e.index, verdict === 'rejected') +
          button('pend', line.index, e.index, verdict === 'pending') +
          `</span>`
      );
    }
    parts.push(`</div>`);
  }
  parts.push(`</div></div>`);
  return parts.join('');
}

function button(action: string, line: number, edit: number, on: boolean): string {
  return (
    `<button class="btn btn-${action}${on ? ' on' : ''}" data-action="${action}" ` +
    `data-line="${line}" data-edit="${edit}">${action}</button>`
  );
}

export function renderStatsBar(stats: {
  total: number;
  accepted: number;
  rejected: number;
  pending: number;
  decidedFraction: number;
}): string {
  const pct = Math.round(stats.decidedFraction * 100);
  return (
    `<span>${stats.total} edits</span>` +
    `<span class="ok">${stats.accepted} accepted</span>` +
    `<span class="no">${stats.rejected} rejected</span>` +
    `<span>${stats.pending} pending</span>` +
    `<span>${pct}% decided</span>`
  );
}
