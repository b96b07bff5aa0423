import { ReviewApi } from './api.js';
import { renderLine, renderStatsBar } from './render.js';
import {
  ReviewState,
  beginDecision,
  commitDecision,
  initialState,
  localStats,
  moveCursor,
  rollbackDecision,
  shownVerdict,
} from './state.js';
import type { Verdict } from './types.js';
import { computeWindow } from './virtual.js';

const ROW_HEIGHT = 92;

const api = new ReviewApi('');
let state: ReviewState | null = null;

const listEl = document.getElementById('lines') as HTMLElement;
const statsEl = document.getElementById('stats') as HTMLElement;
const errorEl = document.getElementById('error') as HTMLElement;
const exportBtn = document.getElementById('export') as HTMLButtonElement;

function showError(message: string | null): void {
  errorEl.textContent = message ?? '';
  errorEl.style.display = message ? 'block' : 'none';
}

function render(): void {
  if (!state) return;
  const lines = state.doc.lines;
  const win = computeWindow(
    lines.length,
    ROW_HEIGHT,
    listEl.scrollTop,
    listEl.clientHeight
  );
  const rows: string[] = [];
  rows.push(`<div style="height:${win.padTop}px"></div>`);
  for (let i = win.start; i < win.end; i++) {
    rows.push(renderLine(state, lines[i]!));
  }
  rows.push(`<div style="height:${win.padBottom}px"></div>`);
  listEl.innerHTML = rows.join('');
  statsEl.innerHTML = renderStatsBar(localStats(state));
}

async function decide(line: number, edit: number, verdict: Verdict): Promise<void> {
  if (!state) return;
  state = beginDecision(state, line, edit, verdict);
  render();
  try {
    const ack = await api.postDecision(line, edit, verdict);
    if (!state) return;
    state = commitDecision(state, ack);
    showError(null);
  } catch (err) {
    if (!state) return;
    state = rollbackDecision(state, line, edit);
    showError(`decision failed: ${(err as Error).message}`);
  }
  render();
}

function scrollCursorIntoView(): void {
  if (!state?.cursor) return;
  const top = state.cursor.line * ROW_HEIGHT;
  if (top < listEl.scrollTop || top > listEl.scrollTop + listEl.clientHeight - ROW_HEIGHT) {
    listEl.scrollTop = Math.max(0, top - listEl.clientHeight / 2);
  }
}

function onKey(event: KeyboardEvent): void {
  if (!state || event.target instanceof HTMLInputElement) return;
  const cursor = state.cursor;
  switch (event.key) {
    case 'j':
      state = moveCursor(state, 1);
      scrollCursorIntoView();
      render();
      break;
    case 'k':
      state = moveCursor(state, -1);
      scrollCursorIntoView();
      render();
      break;
    case 'a':
      if (cursor) void decide(cursor.line, cursor.edit, 'accepted');
      break;
    case 'r':
      if (cursor) void decide(cursor.line, cursor.edit, 'rejected');
      break;
    case 'u':
      if (cursor) void decide(cursor.line, cursor.edit, 'pending');
      break;
  }
}

function onClick(event: MouseEvent): void {
  const target = (event.target as HTMLElement).closest('button.btn');
  if (!target || !state) return;
  const line = Number(target.getAttribute('data-line'));
  const edit = Number(target.getAttribute('data-edit'));
  const action = target.getAttribute('data-action');
  const verdict: Verdict =
    action === 'accept' ? 'accepted' : action === 'reject' ? 'rejected' : 'pending';
  state = { ...state, cursor: { line, edit } };
  void decide(line, edit, verdict);
}

async function exportFlow(): Promise<void> {
  if (!state) return;
  const stats = localStats(state);
  if (stats.pending > 0) {
    const go = window.confirm(
      `${stats.pending} of ${stats.total} edits are still pending and will be ` +
        'applied as-is. Export anyway?'
    );
    if (!go) return;
  }
  try {
    const text = await api.fetchExport();
    const blob = new Blob([text], { type: 'text/plain;charset=utf-8' });
    const a = document.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = `${state.doc.id}.reviewed.txt`;
    a.click();
    URL.revokeObjectURL(a.href);
    showError(null);
  } catch (err) {
    showError(`export failed: ${(err as Error).message}`);
  }
}

async function boot(): Promise<void> {
  try {
    const doc = await api.fetchDocument();
    state = initialState(doc);
    render();
  } catch (err) {
    showError(`cannot load document: ${(err as Error).message}`);
    return;
  }
  listEl.addEventListener('scroll', render);
  window.addEventListener('resize', render);
  document.addEventListener('keydown', onKey);
  listEl.addEventListener('click', onClick);
  exportBtn.addEventListener('click', () => void exportFlow());
}

void boot();

// referenced from the console for debugging sessions
export { state, shownVerdict };
