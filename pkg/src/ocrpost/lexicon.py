"""Recognized-word vocabulary with fast top-k closest-match lookup.

The similarity metric is the gestalt ratio 2*M/T (see ocrpost.kernels);
lookups prune by word length and by character-multiset overlap, neither of
which can exclude a true match, so pruned results equal an exhaustive scan.
"""

from __future__ import annotations

from dataclasses import dataclass

from ocrpost import kernels


class LexiconError(Exception):
    pass


@dataclass(frozen=True)
class Match:
    word: str
    score: float


def similarity(a: str, b: str) -> float:
    """Gestalt similarity ratio in [0, 1]; 1.0 for two empty strings."""
    return kernels.ratio(a, b)


class Lexicon:
    """Immutable lowercased word set, bucketed by length for fuzzy search."""

    def __init__(self, words: set[str], source_manifest: list[tuple[str, int]]):
        if not words:
            raise LexiconError("lexicon is empty; a correction run needs a vocabulary")
        self.words = frozenset(words)
        self.source_manifest = list(source_manifest)
        buckets: dict[int, list[str]] = {}
        for w in words:
            buckets.setdefault(len(w), []).append(w)
        for bucket in buckets.values():
            bucket.sort()
        self.length_buckets = buckets
        self._prepared = {
            length: kernels.prepare_bucket(bucket)
            for length, bucket in buckets.items()
        }

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return contains(self, word)


def load(paths: list[str]) -> Lexicon:
    """Load wordlist files (UTF-8, one word per line, '#' comments)."""
    words: set[str] = set()
    manifest: list[tuple[str, int]] = []
    for path in paths:
        count = 0
        try:
            with open(path, encoding="utf-8") as fh:
                for raw in fh:
                    entry = raw.strip()
                    if not entry or entry.startswith("#"):
                        continue
                    word = entry.lower()
                    if any(ch.isspace() for ch in word):
                        raise LexiconError(
                            f"{path}: wordlist entry contains whitespace: {entry!r}"
                        )
                    words.add(word)
                    count += 1
        except OSError as exc:
            raise LexiconError(f"cannot read wordlist {path}: {exc}") from exc
        manifest.append((path, count))
    return Lexicon(words, manifest)


def contains(lex: Lexicon, word: str) -> bool:
    """Exact membership on the lowercased form; pure numbers always pass."""
    normalized = word.lower()
    if normalized.isdigit():
        return True
    return normalized in lex.words


def _length_admissible(query_len: int, length: int, cutoff: float) -> bool:
    # ratio(a, b) <= 2*min(la, lb)/(la + lb).  Evaluated with the same float
    # expression the kernels use for scores, so skipping a bucket can never
    # drop a word whose exact score would have reached the cutoff.
    total = query_len + length
    if total == 0:
        return cutoff <= 1.0
    return 2.0 * min(query_len, length) / total >= cutoff


def close_matches(
    lex: Lexicon, word: str, k: int = 3, cutoff: float = 0.6
) -> list[Match]:
    """The k most similar lexicon words with ratio >= cutoff.

    Ordered by descending score, ties by ascending word, so results are
    stable across runs, worker counts, and kernel backends.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 <= cutoff <= 1.0:
        raise ValueError("cutoff must be in [0, 1]")
    query = word.lower()
    qprep = kernels.prepare_query(query)
    found: list[tuple[float, str]] = []
    for length in sorted(lex.length_buckets):
        if not _length_admissible(len(query), length, cutoff):
            continue
        bucket = lex.length_buckets[length]
        for idx, score in kernels.scan_bucket(lex._prepared[length], qprep, cutoff):
            found.append((score, bucket[idx]))
    found.sort(key=lambda pair: (-pair[0], pair[1]))
    return [Match(word=w, score=s) for s, w in found[:k]]
