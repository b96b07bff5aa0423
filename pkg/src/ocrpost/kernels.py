"""Select the similarity kernel backend at import time.

The compiled extension is preferred; the pure-Python module is the drop-in
fallback when the extension was not built.  Set OCRPOST_PURE=1 to force the
fallback (used by the benchmark and by parity tests).
"""

from __future__ import annotations

import os

from ocrpost import _pyfallback

if os.environ.get("OCRPOST_PURE"):
    _impl = _pyfallback
else:
    try:
        from ocrpost import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pyfallback

BACKEND: str = _impl.BACKEND

ratio = _impl.ratio
prepare_bucket = _impl.prepare_bucket
prepare_query = _impl.prepare_query
scan_bucket = _impl.scan_bucket
