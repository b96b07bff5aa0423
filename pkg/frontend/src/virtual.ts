/**
 * Fixed-height windowing for long line lists: documents run to hundreds of
 * lines, and only the visible slice (plus overscan) is rendered.
 */
export interface Window {
  start: number; // first rendered row
  end: number; // one past the last rendered row
  padTop: number; // spacer height above, px
  padBottom: number; // spacer height below, px
}

export function computeWindow(
  total: number,
  rowHeight: number,
  scrollTop: number,
  viewportHeight: number,
  overscan = 6
): Window {
  if (total === 0) {
    return { start: 0, end: 0, padTop: 0, padBottom: 0 };
  }
  const first = Math.floor(scrollTop / rowHeight);
  const visible = Math.ceil(viewportHeight / rowHeight) + 1;
  const start = Math.max(0, first - overscan);
  const end = Math.min(total, first + visible + overscan);
  return {
    start,
    end,
    padTop: start * rowHeight,
    padBottom: (total - end) * rowHeight,
  };
}
