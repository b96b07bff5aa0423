import { describe, expect, it } from 'vitest';

import { sampleDocument } from './fixtures.test-helper.js';
import { escapeHtml, renderLine, renderStatsBar } from './render.js';
import { beginDecision, commitDecision, initialState, localStats } from './state.js';

describe('renderLine', () => {
  it('renders one highlighted span with controls per edit', () => {
    const state = initialState(sampleDocument());
    const html = renderLine(state, state.doc.lines[1]!);
    expect(html.match(/class="edit [^"]*"/g)).toHaveLength(3);
    expect(html.match(/data-action="accept"/g)).toHaveLength(3);
    expect(html.match(/data-action="reject"/g)).toHaveLength(3);
    expect(html).toContain('kind-confusion');
    expect(html).toContain('kind-similarity');
  });

  it('renders zero-edit lines without controls', () => {
    const state = initialState(sampleDocument());
    const html = renderLine(state, state.doc.lines[0]!);
    expect(html).not.toContain('class="controls"');
    expect(html).not.toContain('<button');
  });

  it('marks verdicts and saving state on the spans', () => {
    let state = initialState(sampleDocument());
    state = commitDecision(state, { line: 1, edit: 0, verdict: 'rejected', decided_at: 1 });
    state = beginDecision(state, 1, 1, 'accepted');
    const html = renderLine(state, state.doc.lines[1]!);
    expect(html).toContain('verdict-rejected');
    expect(html).toContain('verdict-accepted saving');
  });

  it('escapes markup in document text', () => {
    const doc = sampleDocument();
    doc.lines[0]!.raw = '<script>alert(1)</script>';
    doc.lines[0]!.corrected = '<script>alert(1)</script>';
    const state = initialState(doc);
    const html = renderLine(state, state.doc.lines[0]!);
    expect(html).not.toContain('<script>alert');
    expect(html).toContain('&lt;script&gt;');
  });

  it('marks the cursor edit as active', () => {
    const state = initialState(sampleDocument());
    const html = renderLine(state, state.doc.lines[1]!);
    expect(html).toContain(' active"');
  });
});

describe('renderStatsBar', () => {
  it('summarizes decided fractions', () => {
    let state = initialState(sampleDocument());
    state = commitDecision(state, { line: 1, edit: 0, verdict: 'accepted', decided_at: 1 });
    const html = renderStatsBar(localStats(state));
    expect(html).toContain('4 edits');
    expect(html).toContain('1 accepted');
    expect(html).toContain('25% decided');
  });
});

describe('escapeHtml', () => {
  it('escapes the dangerous characters', () => {
    expect(escapeHtml('a < b & "c" > d')).toBe('a &lt; b &amp; &quot;c&quot; &gt; d');
  });
});
