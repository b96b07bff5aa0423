"""Backoff n-gram language models: ARPA I/O, queries, desk-scale training.

All probabilities are base-10 logs (the ARPA convention).  Perplexity is
10**(-mean log10 prob); any other log base induces the same variant ranking,
which is all the corrector relies on.

Sentence boundaries: scoring prepends BOS and appends EOS, scores both as
ordinary tokens, and counts both in the normalizer.  Variants of one line
share the boundary terms, so the convention is neutral for ranking while
keeping reported numbers reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

DEFAULT_UNK_LOG10 = -7.0

NGram = tuple[str, ...]
# value: (log10 prob, log10 backoff weight or None at the highest order)
Entry = tuple[float, "float | None"]


class ArpaFormatError(Exception):
    pass


@dataclass(frozen=True)
class PerplexityResult:
    ppl: float
    token_count: int
    total_log10: float


class NGramModel:
    def __init__(
        self,
        order: int,
        tables: dict[int, dict[NGram, Entry]],
        unk_log10: float = DEFAULT_UNK_LOG10,
    ):
        if order < 1:
            raise ValueError("model order must be >= 1")
        self.order = order
        self.tables = tables
        self.vocab = frozenset(g[0] for g in tables.get(1, {}))
        unigram_unk = tables.get(1, {}).get((UNK,))
        self.unk_log10 = unigram_unk[0] if unigram_unk else unk_log10

    def logprob(self, word: str, context: tuple[str, ...] = ()) -> float:
        """log10 P(word | context) with standard backoff-weight recursion."""
        context = tuple(context)[-(self.order - 1) :] if self.order > 1 else ()
        return self._logprob(word, context)

    def _logprob(self, word: str, context: tuple[str, ...]) -> float:
        m = len(context) + 1
        entry = self.tables.get(m, {}).get(context + (word,))
        if entry is not None:
            return entry[0]
        if m == 1:
            return self.unk_log10
        ctx_entry = self.tables.get(m - 1, {}).get(context)
        backoff = ctx_entry[1] if ctx_entry and ctx_entry[1] is not None else 0.0
        return backoff + self._logprob(word, context[1:])

    def perplexity(self, words: list[str]) -> PerplexityResult:
        """Perplexity of a lowercased word sequence, boundaries included."""
        if not words:
            raise ValueError("cannot score an empty sequence")
        seq = [BOS, *words, EOS]
        total = 0.0
        for i, word in enumerate(seq):
            lo = max(0, i - (self.order - 1))
            total += self._logprob(word, tuple(seq[lo:i]))
        n = len(seq)
        return PerplexityResult(
            ppl=10.0 ** (-total / n), token_count=n, total_log10=total
        )


def perplexity(model: NGramModel, words: list[str]) -> PerplexityResult:
    return model.perplexity(words)


def logprob(model: NGramModel, word: str, context: tuple[str, ...] = ()) -> float:
    return model.logprob(word, context)


# ---------------------------------------------------------------------------
# ARPA interchange format

def load_arpa(path: str, unk_log10: float = DEFAULT_UNK_LOG10) -> NGramModel:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")

    it = iter(enumerate(lines, 1))
    counts: dict[int, int] = {}

    for lineno, line in it:
        if line.strip() == "\\data\\":
            break
    else:
        raise ArpaFormatError(f"{path}: missing \\data\\ header")

    for lineno, line in it:
        text = line.strip()
        if not text:
            continue
        if text.startswith("\\"):
            break
        if not text.startswith("ngram "):
            raise ArpaFormatError(f"{path}:{lineno}: bad data-section line {text!r}")
        try:
            order_s, count_s = text[len("ngram ") :].split("=")
            counts[int(order_s)] = int(count_s)
        except ValueError as exc:
            raise ArpaFormatError(f"{path}:{lineno}: bad count line {text!r}") from exc
    else:
        raise ArpaFormatError(f"{path}: truncated after \\data\\ section")

    if not counts:
        raise ArpaFormatError(f"{path}: data section declares no n-gram counts")
    max_order = max(counts)

    tables: dict[int, dict[NGram, Entry]] = {m: {} for m in counts}
    current = _section_order(path, lineno, text, max_order)
    while True:
        ended = False
        for lineno, line in it:
            text = line.strip()
            if not text:
                continue
            if text == "\\end\\":
                ended = True
                break
            if text.startswith("\\"):
                current = _section_order(path, lineno, text, max_order)
                break
            fields = text.split()
            if len(fields) == current + 2 and current < max_order:
                backoff: float | None = float(fields[-1])
                words = tuple(fields[1 : current + 1])
            elif len(fields) == current + 1:
                backoff = None
                words = tuple(fields[1:])
            else:
                raise ArpaFormatError(
                    f"{path}:{lineno}: expected a {current}-gram entry, got {text!r}"
                )
            gram = words
            if gram in tables[current]:
                raise ArpaFormatError(f"{path}:{lineno}: duplicate n-gram {text!r}")
            tables[current][gram] = (float(fields[0]), backoff)
        else:
            raise ArpaFormatError(f"{path}: missing \\end\\ marker")
        if ended:
            break

    for order, expected in counts.items():
        got = len(tables[order])
        if got != expected:
            raise ArpaFormatError(
                f"{path}: declared {expected} {order}-grams but parsed {got}"
            )
    for order in range(2, max_order + 1):
        lower = tables[order - 1]
        for gram in tables[order]:
            if gram[:-1] not in lower:
                raise ArpaFormatError(
                    f"{path}: {order}-gram {' '.join(gram)!r} lacks its prefix "
                    f"in the {order - 1}-gram table"
                )
            if gram[1:] not in lower:
                raise ArpaFormatError(
                    f"{path}: {order}-gram {' '.join(gram)!r} lacks its suffix "
                    f"in the {order - 1}-gram table"
                )
    for order, table in tables.items():
        for gram, (lp, _) in table.items():
            if lp > 0.0:
                raise ArpaFormatError(
                    f"{path}: {order}-gram {' '.join(gram)!r} has log10 prob > 0"
                )
    return NGramModel(order=max_order, tables=tables, unk_log10=unk_log10)


def _section_order(path: str, lineno: int, text: str, max_order: int) -> int:
    if not (text.startswith("\\") and text.endswith("-grams:")):
        raise ArpaFormatError(f"{path}:{lineno}: unexpected section header {text!r}")
    try:
        order = int(text[1 : -len("-grams:")])
    except ValueError as exc:
        raise ArpaFormatError(f"{path}:{lineno}: bad section header {text!r}") from exc
    if order > max_order:
        raise ArpaFormatError(
            f"{path}:{lineno}: section order {order} exceeds declared maximum "
            f"{max_order}"
        )
    return order


def write_arpa(model: NGramModel, path: str) -> None:
    """Serialize with fixed section order and 6-decimal probabilities."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\\data\\\n")
        for order in range(1, model.order + 1):
            fh.write(f"ngram {order}={len(model.tables.get(order, {}))}\n")
        for order in range(1, model.order + 1):
            fh.write(f"\n\\{order}-grams:\n")
            for gram in sorted(model.tables.get(order, {})):
                lp, backoff = model.tables[order][gram]
                line = f"{lp:.6f}\t{' '.join(gram)}"
                if backoff is not None and abs(backoff) >= 5e-7:
                    line += f"\t{backoff:.6f}"
                fh.write(line + "\n")
        fh.write("\n\\end\\\n")


# ---------------------------------------------------------------------------
# Desk-scale trainer (absolute discounting)

def train_small(
    corpus_path: str, order: int, discount: float = 0.75
) -> NGramModel:
    """Train a backoff model with a single absolute discount.

    Seen n-grams get (count - d) / context_count; the reserved mass becomes
    the context's backoff weight.  At the unigram level the reserved mass is
    assigned to <unk>.  Deliberately simple enough to verify by hand;
    production models are expected to arrive as externally trained ARPA
    files.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if not 0.0 < discount < 1.0:
        raise ValueError("discount must be in (0, 1)")
    with open(corpus_path, encoding="utf-8") as fh:
        sentences = [line.split() for line in fh if line.strip()]
    if not sentences:
        raise ValueError(f"corpus {corpus_path} is empty")
    return train_from_sentences(sentences, order, discount)


def train_from_sentences(
    sentences: list[list[str]], order: int, discount: float = 0.75
) -> NGramModel:
    counts: dict[int, dict[NGram, int]] = {m: {} for m in range(1, order + 1)}
    for sent in sentences:
        padded = [BOS, *sent, EOS]
        for m in range(1, order + 1):
            table = counts[m]
            for i in range(len(padded) - m + 1):
                gram = tuple(padded[i : i + m])
                table[gram] = table.get(gram, 0) + 1

    # successor totals per context: sum of counts of (context + w)
    ctx_totals: dict[int, dict[NGram, int]] = {m: {} for m in range(0, order)}
    ctx_types: dict[int, dict[NGram, int]] = {m: {} for m in range(0, order)}
    for m in range(1, order + 1):
        for gram, c in counts[m].items():
            ctx = gram[:-1]
            ctx_totals[m - 1][ctx] = ctx_totals[m - 1].get(ctx, 0) + c
            ctx_types[m - 1][ctx] = ctx_types[m - 1].get(ctx, 0) + 1

    d = discount
    tables: dict[int, dict[NGram, Entry]] = {m: {} for m in range(1, order + 1)}

    total_tokens = ctx_totals[0][()]
    for gram, c in counts[1].items():
        tables[1][gram] = ((c - d) / total_tokens, None)
    unk_mass = d * ctx_types[0][()] / total_tokens
    tables[1][(UNK,)] = (unk_mass, None)

    def lower_prob(gram: NGram) -> float:
        # probability (not log) of gram under the (len-1)-shorter model
        if len(gram) == 1:
            return tables[1].get(gram, tables[1][(UNK,)])[0]
        ctx, word = gram[:-1], gram[-1]
        entry = tables[len(gram)].get(gram)
        if entry is not None:
            return entry[0]
        ctx_entry = tables[len(ctx)].get(ctx)
        bow = ctx_entry[1] if ctx_entry and ctx_entry[1] is not None else 1.0
        return bow * lower_prob(gram[1:])

    for m in range(2, order + 1):
        successors: dict[NGram, list[NGram]] = {}
        for gram, c in counts[m].items():
            ctx = gram[:-1]
            tables[m][gram] = ((c - d) / ctx_totals[m - 1][ctx], None)
            successors.setdefault(ctx, []).append(gram)
        # backoff weights for the (m-1)-gram contexts that have successors
        for ctx, total in ctx_totals[m - 1].items():
            reserved = d * ctx_types[m - 1][ctx] / total
            seen_lower = sum(lower_prob(gram[1:]) for gram in successors[ctx])
            denom = 1.0 - seen_lower
            bow = reserved / denom if denom > 1e-12 else 1.0
            lp, _ = tables[m - 1][ctx]
            tables[m - 1][ctx] = (lp, bow)

    log_tables: dict[int, dict[NGram, Entry]] = {m: {} for m in range(1, order + 1)}
    for m, table in tables.items():
        for gram, (p, bow) in table.items():
            log_bow: float | None
            if m == order:
                log_bow = None
            elif bow is None:
                log_bow = 0.0
            else:
                log_bow = math.log10(bow)
            log_tables[m][gram] = (math.log10(p), log_bow)
    return NGramModel(order=order, tables=log_tables)
