"""Replacement-candidate generation.

Three sources feed a token's candidate set:

  1. confusable-character substitution (every word, recognized or not) --
     OCR engines systematically misread certain glyphs, so even a word
     found in the lexicon may hide one;
  2. a single split into two recognized words (unrecognized words only);
  3. the closest lexicon words by gestalt similarity (unrecognized only).

The original word always stays in the set; the language model gets the
final say.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ocrpost.ingest import Token
from ocrpost.lexicon import Lexicon, close_matches, contains

ORIGINAL = "original"
CONFUSION = "confusion"
SPLIT = "split"
SIMILARITY = "similarity"

_KIND_PRIORITY = {ORIGINAL: 0, CONFUSION: 1, SPLIT: 2, SIMILARITY: 3}


class ConfusionMapError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMap:
    """Characters an OCR engine tends to misread, and their true readings.

    max_sites caps how many positions are varied jointly; words with more
    confusable sites than that additionally get the everything-replaced
    variant, which is the common failure shape for repeated glyphs.
    """

    entries: dict[str, tuple[str, ...]] = field(
        default_factory=lambda: {"f": ("s",)}
    )
    max_sites: int = 8

    def __post_init__(self):
        if self.max_sites < 1:
            raise ConfusionMapError("max_sites must be >= 1")
        for src, dsts in self.entries.items():
            if len(src) != 1 or any(len(d) != 1 for d in dsts):
                raise ConfusionMapError(
                    f"confusion entries map single characters: {src!r} -> {dsts!r}"
                )
            if src in dsts:
                raise ConfusionMapError(f"character {src!r} maps to itself")

    def sites(self, word: str) -> list[int]:
        return [i for i, ch in enumerate(word) if ch in self.entries]

    @classmethod
    def from_file(cls, path: str, max_sites: int = 8) -> "ConfusionMap":
        """Parse lines of the form `<char> <char>[,<char>...]`."""
        entries: dict[str, tuple[str, ...]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                text = raw.strip()
                if not text or text.startswith("#"):
                    continue
                parts = text.split(None, 1)
                if len(parts) != 2:
                    raise ConfusionMapError(f"{path}:{lineno}: expected two fields")
                src, repl = parts
                entries[src] = tuple(r.strip() for r in repl.split(","))
        return cls(entries=entries, max_sites=max_sites)


@dataclass(frozen=True)
class Candidate:
    text: str
    kind: str
    score: float | None = None


@dataclass(frozen=True)
class CandidateSet:
    """w plus its alternatives; the original is always first in sequence."""

    original: str
    alternatives: tuple[Candidate, ...]

    @property
    def r(self) -> int:
        return len(self.alternatives)

    def texts(self) -> list[str]:
        return [self.original] + [c.text for c in self.alternatives]


def _apply_sites(word: str, chosen: tuple[int, ...], repls: tuple[str, ...]) -> str:
    chars = list(word)
    for pos, repl in zip(chosen, repls):
        chars[pos] = repl
    return "".join(chars)


def _variants_for_positions(
    word: str, positions: tuple[int, ...], cmap: ConfusionMap
) -> set[str]:
    options = [cmap.entries[word[p]] for p in positions]
    return {
        _apply_sites(word, positions, combo) for combo in itertools.product(*options)
    }


def confusion_variants(word: str, cmap: ConfusionMap, lex: Lexicon) -> set[Candidate]:
    """Recognized words reachable by replacing confusable characters.

    All subsets of the first max_sites confusable positions are tried; when
    the word has more sites than that, the all-sites substitution is tried
    as well.
    """
    sites = cmap.sites(word)
    if not sites:
        return set()
    considered = sites[: cmap.max_sites]
    produced: set[str] = set()
    for size in range(1, len(considered) + 1):
        for chosen in itertools.combinations(considered, size):
            produced |= _variants_for_positions(word, chosen, cmap)
    if len(sites) > cmap.max_sites:
        produced |= _variants_for_positions(word, tuple(sites), cmap)
    return {
        Candidate(text=v, kind=CONFUSION)
        for v in produced
        if v != word and contains(lex, v)
    }


def split_variants(word: str, lex: Lexicon) -> set[Candidate]:
    """Two-word readings of a run-together token, both halves recognized."""
    out: set[Candidate] = set()
    for cut in range(1, len(word)):
        left, right = word[:cut], word[cut:]
        if contains(lex, left) and contains(lex, right):
            out.add(Candidate(text=f"{left} {right}", kind=SPLIT))
    return out


def generate(
    token: Token | str,
    lex: Lexicon,
    cmap: ConfusionMap | None = None,
    k: int = 3,
    cutoff: float = 0.6,
) -> CandidateSet:
    """Assemble a token's full candidate set.

    Recognized words are only probed for confusable characters; everything
    else additionally gets split and similarity candidates.  Duplicate texts
    keep the highest-priority kind (original > confusion > split >
    similarity).
    """
    cmap = cmap or ConfusionMap()
    word = token.normalized if isinstance(token, Token) else token.lower()
    recognized = contains(lex, word)
    if recognized and not cmap.sites(word):
        return CandidateSet(original=word, alternatives=())

    collected: list[Candidate] = sorted(
        confusion_variants(word, cmap, lex), key=lambda c: c.text
    )
    if not recognized:
        collected.extend(
            sorted(split_variants(word, lex), key=lambda c: c.text)
        )
        collected.extend(
            Candidate(text=m.word, kind=SIMILARITY, score=m.score)
            for m in close_matches(lex, word, k=k, cutoff=cutoff)
        )

    best: dict[str, Candidate] = {}
    order: list[str] = []
    for cand in collected:
        if cand.text == word:
            continue
        kept = best.get(cand.text)
        if kept is None:
            best[cand.text] = cand
            order.append(cand.text)
        elif _KIND_PRIORITY[cand.kind] < _KIND_PRIORITY[kept.kind]:
            best[cand.text] = cand
    return CandidateSet(
        original=word, alternatives=tuple(best[t] for t in order)
    )
