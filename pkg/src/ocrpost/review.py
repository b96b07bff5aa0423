"""HTTP review service for correction ledgers.

Serves a run's lines and edits to the browser UI, records per-edit
accept/reject verdicts (durably, before acknowledging), and exports the
final text: accepted and still-pending edits stay applied, rejected ones
revert to the raw token.  With no decisions at all the export equals the
batch tool's output.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ocrpost.corrector import CorrectedLine, parse_ledger
from ocrpost.ingest import Line, tokenize

VERDICTS = ("pending", "accepted", "rejected")


class ReviewError(Exception):
    pass


@dataclass
class ReviewEdit:
    index: int
    token_index: int
    original: str
    replacement: str
    kind: str | None = None
    ppl_before: float | None = None
    ppl_after: float | None = None
    verdict: str = "pending"
    decided_at: float | None = None


class ReviewSession:
    """One document under review; decisions persist as a JSONL sidecar."""

    def __init__(
        self,
        raw_lines: list[str],
        edits_per_line: list[list[ReviewEdit]],
        decisions_path: str | None = None,
        doc_id: str = "document",
    ):
        if len(raw_lines) != len(edits_per_line):
            raise ReviewError("raw line count does not match the ledger")
        self.doc_id = doc_id
        self.lines: list[Line] = [tokenize(raw, i) for i, raw in enumerate(raw_lines)]
        self.edits = edits_per_line
        self.decisions_path = decisions_path
        self._lock = threading.Lock()
        if decisions_path and os.path.exists(decisions_path):
            self._replay_decisions(decisions_path)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_run(
        cls,
        raw_lines: list[str],
        corrected: list[CorrectedLine],
        decisions_path: str | None = None,
        doc_id: str = "document",
    ) -> "ReviewSession":
        edits_per_line = [
            [
                ReviewEdit(
                    index=j,
                    token_index=e.token_index,
                    original=e.original_surface,
                    replacement=e.replacement_surface,
                    kind=e.kind,
                    ppl_before=e.ppl_before,
                    ppl_after=e.ppl_after,
                )
                for j, e in enumerate(cl.edits)
            ]
            for cl in corrected
        ]
        return cls(raw_lines, edits_per_line, decisions_path, doc_id)

    @classmethod
    def load(
        cls,
        ledger_path: str,
        raw_path: str,
        decisions_path: str | None = None,
    ) -> "ReviewSession":
        """Rebuild a session from the two-column ledger plus the raw lines.

        The ledger stores surface pairs only, so each edit is re-anchored to
        its token by walking the raw and corrected token streams in step.
        """
        with open(raw_path, encoding="utf-8") as fh:
            raw_lines = fh.read().replace("\r\n", "\n").rstrip("\n").split("\n")
        with open(ledger_path, encoding="utf-8") as fh:
            rows = parse_ledger(fh)
        if len(rows) != len(raw_lines):
            raise ReviewError(
                f"ledger has {len(rows)} rows but raw text has {len(raw_lines)} lines"
            )
        edits_per_line = []
        for lineno, (raw, (text, pairs)) in enumerate(zip(raw_lines, rows)):
            edits_per_line.append(_anchor_edits(lineno, raw, text, pairs))
        if decisions_path is None:
            decisions_path = ledger_path + ".decisions.jsonl"
        return cls(
            raw_lines,
            edits_per_line,
            decisions_path,
            doc_id=os.path.basename(ledger_path),
        )

    # -- decisions ----------------------------------------------------------

    def _replay_decisions(self, path: str) -> None:
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                if not raw.strip():
                    continue
                rec = json.loads(raw)
                edit = self._edit(rec["line"], rec["edit"])
                edit.verdict = rec["verdict"]
                edit.decided_at = rec.get("ts")

    def _edit(self, line_index: int, edit_index: int) -> ReviewEdit:
        if not 0 <= line_index < len(self.edits):
            raise ReviewError(f"no line {line_index}")
        line_edits = self.edits[line_index]
        if not 0 <= edit_index < len(line_edits):
            raise ReviewError(f"no edit {edit_index} on line {line_index}")
        return line_edits[edit_index]

    def decide(self, line_index: int, edit_index: int, verdict: str) -> ReviewEdit:
        if verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {verdict!r}")
        with self._lock:
            edit = self._edit(line_index, edit_index)
            if edit.verdict == verdict:
                return edit  # idempotent; nothing new to persist
            edit.verdict = verdict
            edit.decided_at = time.time()
            if self.decisions_path:
                record = json.dumps(
                    {
                        "line": line_index,
                        "edit": edit_index,
                        "verdict": verdict,
                        "ts": edit.decided_at,
                    }
                )
                with open(self.decisions_path, "a", encoding="utf-8") as fh:
                    fh.write(record + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            return edit

    # -- views --------------------------------------------------------------

    def _surfaces(self, line: Line, skip_rejected: bool) -> list[str]:
        surfaces = [tok.surface for tok in line.tokens]
        for edit in self.edits[line.index]:
            if skip_rejected and edit.verdict == "rejected":
                continue
            surfaces[edit.token_index] = edit.replacement
        return surfaces

    def _rebuild(self, line: Line, surfaces: list[str], spans=None) -> str:
        parts = [line.interstitial[0]]
        pos = len(parts[0])
        for idx, (surface, gap) in enumerate(zip(surfaces, line.interstitial[1:])):
            if spans is not None:
                spans[idx] = (pos, pos + len(surface))
            parts.append(surface)
            pos += len(surface) + len(gap)
            parts.append(gap)
        return "".join(parts)

    def export_text(self) -> str:
        with self._lock:
            lines = [
                self._rebuild(line, self._surfaces(line, skip_rejected=True))
                for line in self.lines
            ]
        return "\n".join(lines) + "\n"

    def document_payload(self) -> dict:
        with self._lock:
            out = []
            for line in self.lines:
                spans: dict[int, tuple[int, int]] = {}
                corrected = self._rebuild(
                    line, self._surfaces(line, skip_rejected=False), spans
                )
                out.append(
                    {
                        "index": line.index,
                        "raw": line.raw,
                        "corrected": corrected,
                        "edits": [
                            {
                                "index": e.index,
                                "token_index": e.token_index,
                                "original": e.original,
                                "replacement": e.replacement,
                                "kind": e.kind,
                                "verdict": e.verdict,
                                "ppl_before": e.ppl_before,
                                "ppl_after": e.ppl_after,
                                "raw_span": list(
                                    line.tokens[e.token_index].char_span
                                ),
                                "corrected_span": list(spans[e.token_index]),
                            }
                            for e in self.edits[line.index]
                        ],
                    }
                )
        return {"id": self.doc_id, "lines": out}

    def stats_payload(self) -> dict:
        with self._lock:
            total = sum(len(edits) for edits in self.edits)
            by_verdict = {v: 0 for v in VERDICTS}
            for edits in self.edits:
                for e in edits:
                    by_verdict[e.verdict] += 1
        decided = by_verdict["accepted"] + by_verdict["rejected"]
        return {
            "lines": len(self.lines),
            "edits_total": total,
            "accepted": by_verdict["accepted"],
            "rejected": by_verdict["rejected"],
            "pending": by_verdict["pending"],
            "decided_fraction": decided / total if total else 1.0,
        }


def _anchor_edits(
    lineno: int, raw: str, corrected_text: str, pairs: list[tuple[str, str]]
) -> list[ReviewEdit]:
    raw_toks = [t.surface for t in tokenize(raw).tokens]
    cor_toks = [t.surface for t in tokenize(corrected_text).tokens]
    edits: list[ReviewEdit] = []
    ri = ci = 0
    for j, (orig, new) in enumerate(pairs):
        while ri < len(raw_toks) and ci < len(cor_toks) and raw_toks[ri] == cor_toks[ci]:
            ri += 1
            ci += 1
        if ri >= len(raw_toks) or raw_toks[ri] != orig:
            raise ReviewError(
                f"line {lineno}: edit {orig!r} -> {new!r} does not match the text"
            )
        consumed = new.split(" ")
        if cor_toks[ci : ci + len(consumed)] != consumed:
            raise ReviewError(
                f"line {lineno}: corrected column does not contain {new!r}"
            )
        kind = "split" if " " in new else None
        edits.append(
            ReviewEdit(index=j, token_index=ri, original=orig, replacement=new, kind=kind)
        )
        ri += 1
        ci += len(consumed)
    return edits


# ---------------------------------------------------------------------------
# HTTP layer

_DECISION_RE = re.compile(r"^/api/lines/(\d+)/edits/(\d+)/decision$")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".map": "application/json",
    ".ico": "image/x-icon",
}


def make_handler(session: ReviewSession, ui_dir: str | None = None, quiet: bool = True):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            if not quiet:
                super().log_message(fmt, *args)

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _send_json(self, payload, status=200):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self._cors()
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_text(self, text, status=200, content_type="text/plain; charset=utf-8"):
            body = text.encode("utf-8") if isinstance(text, str) else text
            self.send_response(status)
            self._cors()
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.end_headers()

        def do_GET(self):
            if self.path == "/api/document":
                self._send_json(session.document_payload())
            elif self.path == "/api/export":
                self._send_text(session.export_text())
            elif self.path == "/api/stats":
                self._send_json(session.stats_payload())
            elif ui_dir:
                self._send_static()
            else:
                self._send_text("ocrpost review service\n")

        def _send_static(self):
            rel = self.path.lstrip("/") or "index.html"
            full = os.path.realpath(os.path.join(ui_dir, rel))
            if not full.startswith(os.path.realpath(ui_dir) + os.sep) and full != os.path.realpath(
                os.path.join(ui_dir, "index.html")
            ):
                self._send_json({"error": "not found"}, status=404)
                return
            if not os.path.isfile(full):
                self._send_json({"error": "not found"}, status=404)
                return
            ext = os.path.splitext(full)[1]
            with open(full, "rb") as fh:
                self._send_text(
                    fh.read(),
                    content_type=_CONTENT_TYPES.get(ext, "application/octet-stream"),
                )

        def do_POST(self):
            m = _DECISION_RE.match(self.path)
            if not m:
                self._send_json({"error": "unknown endpoint"}, status=404)
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
                verdict = body["verdict"]
            except (ValueError, KeyError):
                self._send_json({"error": "body must be {\"verdict\": ...}"}, status=400)
                return
            try:
                edit = session.decide(int(m.group(1)), int(m.group(2)), verdict)
            except ValueError as exc:
                self._send_json({"error": str(exc)}, status=400)
                return
            except ReviewError as exc:
                self._send_json({"error": str(exc)}, status=404)
                return
            self._send_json(
                {
                    "line": int(m.group(1)),
                    "edit": edit.index,
                    "verdict": edit.verdict,
                    "decided_at": edit.decided_at,
                }
            )

    return Handler


class ReviewServer:
    """Threaded HTTP server bound to the session; port 0 picks a free port."""

    def __init__(self, session: ReviewSession, port: int = 8765,
                 ui_dir: str | None = None, quiet: bool = True):
        self.session = session
        try:
            self.httpd = ThreadingHTTPServer(
                ("127.0.0.1", port), make_handler(session, ui_dir, quiet)
            )
        except OSError as exc:
            raise ReviewError(f"cannot bind port {port}: {exc}") from exc
        self.port = self.httpd.server_address[1]
        self._thread: threading.Thread | None = None

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread:
            self._thread.join(timeout=5)
