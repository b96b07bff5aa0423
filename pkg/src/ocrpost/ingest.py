"""Text acquisition and tokenization for scanned-document pipelines.

Input is either a plain text file or the per-page output of an external
OCR command run over a PDF.  Lines are split into case-annotated tokens
while keeping every interstitial byte, so a line can always be rebuilt
exactly from its parts.
"""

from __future__ import annotations

import concurrent.futures
import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass


class IngestError(Exception):
    """Unreadable input, bad page range, or rejected option combination."""


class OcrCommandError(IngestError):
    """External OCR command failed; carries the captured stderr."""

    def __init__(self, message: str, stderr: str = ""):
        super().__init__(message)
        self.stderr = stderr


# Tokens are maximal runs of letters/digits, allowing internal hyphens and
# apostrophes ("Deputy-Governor", "o'clock").  Underscore is interstitial.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")
_WORD_START_RE = re.compile(r"^[^\W_]")


@dataclass(frozen=True)
class CasePattern:
    """How a token was capitalized, recoverable onto a replacement word.

    kind is one of "lower", "title", "upper", "mixed".  For "mixed" the
    uppercase positions are kept as a bitmask valid for strings of the
    original length only.
    """

    kind: str
    mask: int = 0
    length: int = 0


LOWER = CasePattern("lower")
TITLE = CasePattern("title")
UPPER = CasePattern("upper")


def case_pattern_of(surface: str) -> CasePattern:
    if surface == surface.lower():
        return LOWER
    if surface[:1].isupper() and surface[1:] == surface[1:].lower():
        return TITLE
    if surface == surface.upper():
        return UPPER
    mask = 0
    for i, ch in enumerate(surface):
        if ch.isupper():
            mask |= 1 << i
    return CasePattern("mixed", mask, len(surface))


def apply_case(pattern: CasePattern, text: str) -> str:
    """Reapply a case pattern to a (lowercased) replacement.

    Multi-word replacements (one internal space) get the pattern per word
    where the pattern is position-independent.  A mixed mask only maps onto
    strings of the recorded length; otherwise it degrades to title case if
    position 0 was uppercase, else lower case.
    """
    if pattern.kind == "lower":
        return text
    if pattern.kind == "upper":
        return text.upper()
    if pattern.kind == "title":
        return " ".join(w[:1].upper() + w[1:] for w in text.split(" "))
    # mixed
    if len(text) == pattern.length and " " not in text:
        return "".join(
            ch.upper() if pattern.mask >> i & 1 else ch for i, ch in enumerate(text)
        )
    if pattern.mask & 1:
        return apply_case(TITLE, text)
    return text


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    case_pattern: CasePattern
    char_span: tuple[int, int]


@dataclass(frozen=True)
class Line:
    index: int
    tokens: tuple[Token, ...]
    interstitial: tuple[str, ...]  # len(tokens) + 1 pieces

    @property
    def raw(self) -> str:
        return detokenize(self.tokens, self.interstitial)


@dataclass(frozen=True)
class RawDocument:
    pages: tuple[str, ...]
    source: str

    def lines(self) -> list[str]:
        out: list[str] = []
        for page in self.pages:
            out.extend(page.split("\n"))
        return out


def tokenize(raw_line: str, index: int = 0) -> Line:
    tokens: list[Token] = []
    interstitial: list[str] = []
    pos = 0
    for m in _TOKEN_RE.finditer(raw_line):
        interstitial.append(raw_line[pos : m.start()])
        surface = m.group(0)
        tokens.append(
            Token(
                surface=surface,
                normalized=surface.lower(),
                case_pattern=case_pattern_of(surface),
                char_span=(m.start(), m.end()),
            )
        )
        pos = m.end()
    interstitial.append(raw_line[pos:])
    return Line(index=index, tokens=tuple(tokens), interstitial=tuple(interstitial))


def detokenize(tokens, interstitial) -> str:
    parts = [interstitial[0]]
    for tok, gap in zip(tokens, interstitial[1:]):
        parts.append(tok.surface if isinstance(tok, Token) else tok)
        parts.append(gap)
    return "".join(parts)


def rejoin_hyphens(doc: RawDocument) -> RawDocument:
    """Merge line-end hyphen splits within each page.

    A line whose last non-space character is "-" donates the hyphen-free
    fragment; the first word of the following line is pulled up to complete
    it.  Idempotent, and a no-op when the next line does not start with a
    word character.
    """
    pages = tuple(_rejoin_page(page) for page in doc.pages)
    return RawDocument(pages=pages, source=doc.source)


def _rejoin_page(page: str) -> str:
    lines = page.split("\n")
    # Bottom-up, so a word split across three print lines chains back
    # together and one pass reaches a fixpoint (idempotence).
    for i in range(len(lines) - 2, -1, -1):
        stripped = lines[i].rstrip()
        if not stripped.endswith("-"):
            continue
        nxt = lines[i + 1]
        if not _WORD_START_RE.match(nxt):
            continue
        word = _TOKEN_RE.match(nxt).group(0)
        lines[i] = stripped[:-1] + word
        lines[i + 1] = nxt[len(word) :].lstrip()
    return "\n".join(lines)


def acquire(
    source: str,
    page_range: tuple[int, int] | None = None,
    ocr_command: str | None = None,
    workers: int = 1,
) -> RawDocument:
    """Read a text file, or OCR a page range of a document.

    The OCR engine is an external command template with the placeholders
    {input}, {page} and {output}; it is invoked once per page.  When the
    template names {output} the page text is read from that file, otherwise
    stdout is captured.  Pages run concurrently but are reassembled in
    order.
    """
    if ocr_command is None:
        if page_range is not None:
            raise IngestError("page range is only valid with an OCR command")
        if not os.path.isfile(source):
            raise IngestError(f"input file not found: {source}")
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IngestError(f"cannot read {source}: {exc}") from exc
        return RawDocument(
            pages=(text.replace("\r\n", "\n").rstrip("\n"),), source=source
        )

    if page_range is None:
        raise IngestError("an OCR command requires an explicit page range")
    first, last = page_range
    if first < 1 or last < first:
        raise IngestError(f"invalid page range {first}..{last}")
    if not os.path.isfile(source):
        raise IngestError(f"input file not found: {source}")

    pages_nums = list(range(first, last + 1))
    if workers <= 1 or len(pages_nums) == 1:
        pages = [_ocr_page(ocr_command, source, p) for p in pages_nums]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            pages = list(
                pool.map(lambda p: _ocr_page(ocr_command, source, p), pages_nums)
            )
    return RawDocument(
        pages=tuple(pages), source=f"{source}[{first}..{last}] via {ocr_command!r}"
    )


def _ocr_page(template: str, source: str, page: int) -> str:
    out_path = None
    if "{output}" in template:
        fd, out_path = tempfile.mkstemp(prefix=f"ocrpost_p{page}_", suffix=".txt")
        os.close(fd)
    try:
        cmd = template.replace("{input}", source).replace("{page}", str(page))
        if out_path is not None:
            cmd = cmd.replace("{output}", out_path)
        proc = subprocess.run(
            shlex.split(cmd), capture_output=True, text=True, check=False
        )
        if proc.returncode != 0:
            raise OcrCommandError(
                f"OCR command failed on page {page} "
                f"(exit {proc.returncode}): {proc.stderr.strip()}",
                stderr=proc.stderr,
            )
        if out_path is not None:
            with open(out_path, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = proc.stdout
        text = text.replace("\r\n", "\n")
        return text[:-1] if text.endswith("\n") else text
    finally:
        if out_path is not None and os.path.exists(out_path):
            os.unlink(out_path)
