import { describe, expect, it } from 'vitest';

import { computeWindow } from './virtual.js';

describe('computeWindow', () => {
  it('renders from the top when unscrolled', () => {
    const win = computeWindow(576, 92, 0, 800);
    expect(win.start).toBe(0);
    expect(win.padTop).toBe(0);
    expect(win.end).toBeGreaterThan(9);
    expect(win.end).toBeLessThan(30);
  });

  it('keeps spacer heights consistent with the full list height', () => {
    for (const scrollTop of [0, 500, 9000, 52000]) {
      const win = computeWindow(576, 92, scrollTop, 800);
      const rendered = (win.end - win.start) * 92;
      expect(win.padTop + rendered + win.padBottom).toBe(576 * 92);
    }
  });

  it('covers the visible rows at any offset', () => {
    const win = computeWindow(576, 92, 9000, 800);
    expect(win.start * 92).toBeLessThanOrEqual(9000);
    expect(win.end * 92).toBeGreaterThanOrEqual(9000 + 800);
  });

  it('clamps at the end of the list', () => {
    const win = computeWindow(20, 92, 100000, 800);
    expect(win.end).toBe(20);
    expect(win.padBottom).toBe(0);
  });

  it('handles empty documents', () => {
    expect(computeWindow(0, 92, 0, 800)).toEqual({
      start: 0,
      end: 0,
      padTop: 0,
      padBottom: 0,
    });
  });
});
