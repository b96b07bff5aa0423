"""Greedy line correction with perplexity-ranked candidate selection.

Tokens are scanned left to right; each flagged token's candidates are
substituted into the current (already partially corrected) lowercased word
sequence, the variant with the lowest perplexity wins, and an edit is
recorded only when a replacement wins strictly.  Case and interstitial
bytes are restored afterwards, so an untouched line round-trips exactly.
"""

from __future__ import annotations

import concurrent.futures
import io
from dataclasses import dataclass

from ocrpost.candidates import SPLIT, Candidate, CandidateSet, ConfusionMap, generate
from ocrpost.ingest import (
    CasePattern,
    Line,
    RawDocument,
    apply_case,
    rejoin_hyphens,
    tokenize,
)
from ocrpost.lexicon import Lexicon
from ocrpost.ngram import NGramModel

# Relative perplexity margin below which two variants count as tied; ties
# keep the earlier variant, so the original always survives a dead heat.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Edit:
    line_index: int
    token_index: int
    original_surface: str
    replacement_surface: str
    kind: str
    ppl_before: float
    ppl_after: float


@dataclass(frozen=True)
class CorrectedLine:
    line_index: int
    text: str
    edits: tuple[Edit, ...]


@dataclass(frozen=True)
class CorrectorConfig:
    k: int = 3
    cutoff: float = 0.6
    workers: int = 1


def build_variants(
    current_words: list[list[str]], token_slot: int, cands: CandidateSet
) -> list[list[str]]:
    """One lowercased word sequence per candidate, the original first.

    current_words holds one word list per original token slot (splits leave
    two words in a slot); only token_slot varies across the variants.
    """
    prefix = [w for slot in current_words[:token_slot] for w in slot]
    suffix = [w for slot in current_words[token_slot + 1 :] for w in slot]
    variants = []
    for text in cands.texts():
        variants.append(prefix + text.split(" ") + suffix)
    return variants


def variants_for_line(line: Line, token_index: int, cands: CandidateSet):
    """Variant sequences against the line as tokenized (no prior edits)."""
    slots = [[tok.normalized] for tok in line.tokens]
    return build_variants(slots, token_index, cands)


def select_best(variants: list[list[str]], model: NGramModel) -> int:
    """Index of the lowest-perplexity variant; near-ties keep the earliest."""
    if not variants:
        raise ValueError("no variants to select from")
    best_idx = 0
    best_ppl = model.perplexity(variants[0]).ppl
    for idx in range(1, len(variants)):
        ppl = model.perplexity(variants[idx]).ppl
        if ppl < best_ppl * (1.0 - TIE_RTOL):
            best_idx, best_ppl = idx, ppl
    return best_idx


def restore_case(pattern: CasePattern, replacement: str) -> str:
    """Carry a token's capitalization onto its (lowercased) replacement."""
    return apply_case(pattern, replacement)


def _replacement_surface(pattern: CasePattern, candidate: Candidate) -> str:
    if candidate.kind == SPLIT:
        left, right = candidate.text.split(" ")
        if pattern.kind == "upper":
            return f"{left.upper()} {right.upper()}"
        # first subword carries the pattern, the second stays lower
        return f"{restore_case(pattern, left)} {right}"
    return restore_case(pattern, candidate.text)


def correct_line(
    line: Line,
    lex: Lexicon,
    cmap: ConfusionMap,
    model: NGramModel,
    config: CorrectorConfig = CorrectorConfig(),
) -> CorrectedLine:
    slots: list[list[str]] = [[tok.normalized] for tok in line.tokens]
    surfaces: list[str] = [tok.surface for tok in line.tokens]
    edits: list[Edit] = []
    for i, tok in enumerate(line.tokens):
        cands = generate(tok, lex, cmap, k=config.k, cutoff=config.cutoff)
        if cands.r == 0:
            continue
        variants = build_variants(slots, i, cands)
        ppls = [model.perplexity(v).ppl for v in variants]
        best = 0
        for idx in range(1, len(variants)):
            if ppls[idx] < ppls[best] * (1.0 - TIE_RTOL):
                best = idx
        if best == 0:
            continue
        chosen = cands.alternatives[best - 1]
        slots[i] = chosen.text.split(" ")
        surface = _replacement_surface(tok.case_pattern, chosen)
        surfaces[i] = surface
        edits.append(
            Edit(
                line_index=line.index,
                token_index=i,
                original_surface=tok.surface,
                replacement_surface=surface,
                kind=chosen.kind,
                ppl_before=ppls[0],
                ppl_after=ppls[best],
            )
        )
    text = _rebuild(line, surfaces)
    return CorrectedLine(line_index=line.index, text=text, edits=tuple(edits))


def _rebuild(line: Line, surfaces: list[str]) -> str:
    parts = [line.interstitial[0]]
    for surface, gap in zip(surfaces, line.interstitial[1:]):
        parts.append(surface)
        parts.append(gap)
    return "".join(parts)


_WORKER_STATE: dict = {}


def _init_worker(lex, cmap, model, config):
    _WORKER_STATE.update(lex=lex, cmap=cmap, model=model, config=config)


def _correct_raw_line(args: tuple[int, str]) -> CorrectedLine:
    index, raw = args
    return correct_line(
        tokenize(raw, index),
        _WORKER_STATE["lex"],
        _WORKER_STATE["cmap"],
        _WORKER_STATE["model"],
        _WORKER_STATE["config"],
    )


def correct_document(
    doc: RawDocument,
    lex: Lexicon,
    cmap: ConfusionMap,
    model: NGramModel,
    config: CorrectorConfig = CorrectorConfig(),
) -> list[CorrectedLine]:
    """Rejoin hyphen splits, then correct every line independently.

    Lines are independent work items; with config.workers > 1 they are
    corrected in a process pool and reassembled in order, so the output is
    identical for any worker count.
    """
    rejoined = rejoin_hyphens(doc)
    numbered = list(enumerate(rejoined.lines()))
    if config.workers <= 1 or len(numbered) <= 1:
        _init_worker(lex, cmap, model, config)
        return [_correct_raw_line(item) for item in numbered]
    with concurrent.futures.ProcessPoolExecutor(
        max_workers=config.workers,
        initializer=_init_worker,
        initargs=(lex, cmap, model, config),
    ) as pool:
        return list(pool.map(_correct_raw_line, numbered, chunksize=16))


# ---------------------------------------------------------------------------
# Two-column ledger serialization

ARROWS = {"ascii": " -> ", "unicode": " → "}


def format_edits(edits, arrow: str = "ascii") -> str:
    sep = ARROWS[arrow]
    return "; ".join(
        f"{e.original_surface}{sep}{e.replacement_surface}" for e in edits
    )


def write_ledger(lines: list[CorrectedLine], fh: io.TextIOBase, arrow: str = "ascii",
                 header: list[str] | None = None) -> None:
    for comment in header or []:
        fh.write(f"# {comment}\n")
    for cl in lines:
        fh.write(f"{cl.text}\t{format_edits(cl.edits, arrow)}\n")


def parse_ledger(fh) -> list[tuple[str, list[tuple[str, str]]]]:
    """Read a two-column ledger back into (text, [(orig, new), ...]) rows."""
    rows: list[tuple[str, list[tuple[str, str]]]] = []
    for raw in fh:
        line = raw.rstrip("\n")
        if line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError("ledger row lacks a tab separator")
        # the edits column never contains a tab, so split on the last one
        text, _, edit_col = line.rpartition("\t")
        pairs: list[tuple[str, str]] = []
        if edit_col:
            for chunk in edit_col.split("; "):
                for sep in (" -> ", " → "):
                    if sep in chunk:
                        orig, _, new = chunk.partition(sep)
                        pairs.append((orig, new))
                        break
                else:
                    raise ValueError(f"unparseable edit entry {chunk!r}")
        rows.append((text, pairs))
    return rows
