"""Correction-quality metrics against a ground-truth transcription.

WER/CER are minimal unit-cost edit distances normalized by reference
length, aggregated corpus-wide.  Token errors are read off the raw-vs-
reference alignment backtrace; an error counts as fixed when the corrected
text aligns the same reference token to an exact match.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class EvalReport:
    wer_before: float
    wer_after: float
    cer_before: float
    cer_after: float
    errors_total: int
    errors_fixed: int
    correction_rate: float | None
    lines_with_edits_fraction: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def edit_distance(a, b) -> int:
    """Minimal substitution/insertion/deletion count between two sequences."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _align(hyp: list[str], ref: list[str]) -> list[tuple[int | None, int | None]]:
    """Backtraced alignment as (hyp_index, ref_index) pairs.

    None marks the unmatched side of an insertion/deletion.  Ties prefer a
    substitution over an insert+delete pair.
    """
    n, m = len(hyp), len(ref)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            dist[i][j] = min(
                dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]),
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
            )
    pairs: list[tuple[int | None, int | None]] = []
    i, j = n, m
    while i > 0 or j > 0:
        if (
            i > 0
            and j > 0
            and dist[i][j] == dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1])
        ):
            pairs.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            pairs.append((i - 1, None))
            i -= 1
        else:
            pairs.append((None, j - 1))
            j -= 1
    pairs.reverse()
    return pairs


def evaluate(
    raw: list[str],
    corrected: list[str],
    reference: list[str],
    ignore_case: bool = False,
) -> EvalReport:
    if not (len(raw) == len(corrected) == len(reference)):
        raise EvalError(
            f"line counts differ: raw={len(raw)} corrected={len(corrected)} "
            f"reference={len(reference)}"
        )
    if ignore_case:
        raw = [s.lower() for s in raw]
        corrected = [s.lower() for s in corrected]
        reference = [s.lower() for s in reference]

    word_dist_before = word_dist_after = 0
    char_dist_before = char_dist_after = 0
    ref_words = ref_chars = 0
    errors_total = errors_fixed = 0
    lines_with_edits = 0

    for raw_line, cor_line, ref_line in zip(raw, corrected, reference):
        raw_toks, cor_toks, ref_toks = (
            raw_line.split(),
            cor_line.split(),
            ref_line.split(),
        )
        ref_words += len(ref_toks)
        ref_chars += len(ref_line)
        word_dist_before += edit_distance(raw_toks, ref_toks)
        word_dist_after += edit_distance(cor_toks, ref_toks)
        char_dist_before += edit_distance(raw_line, ref_line)
        char_dist_after += edit_distance(cor_line, ref_line)
        if raw_line != cor_line:
            lines_with_edits += 1

        fixed_refs = {
            rj
            for cj, rj in _align(cor_toks, ref_toks)
            if cj is not None and rj is not None and cor_toks[cj] == ref_toks[rj]
        }
        for hj, rj in _align(raw_toks, ref_toks):
            if hj is None or rj is None:
                continue
            if raw_toks[hj] != ref_toks[rj]:
                errors_total += 1
                if rj in fixed_refs:
                    errors_fixed += 1

    return EvalReport(
        wer_before=word_dist_before / ref_words if ref_words else 0.0,
        wer_after=word_dist_after / ref_words if ref_words else 0.0,
        cer_before=char_dist_before / ref_chars if ref_chars else 0.0,
        cer_after=char_dist_after / ref_chars if ref_chars else 0.0,
        errors_total=errors_total,
        errors_fixed=errors_fixed,
        correction_rate=errors_fixed / errors_total if errors_total else None,
        lines_with_edits_fraction=lines_with_edits / len(raw) if raw else 0.0,
    )
