"""Pure-Python gestalt similarity kernels.

Mirror of the compiled module in ocrpost._speedups: the similarity ratio is
2*M/T where M is the total length of the matching blocks found by repeatedly
taking the longest common block and recursing into the pieces left and right
of it, and T is the combined length of both strings.  Block ties are broken
toward the earliest start in the first string, then the earliest start in
the second, so both implementations return bit-identical scores.
"""

from __future__ import annotations

BACKEND = "pure"


def _longest_block(a, b, alo, ahi, blo, bhi):
    besti, bestj, bestsize = alo, blo, 0
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        ai = a[i]
        newj2len: dict[int, int] = {}
        for j in range(blo, bhi):
            if b[j] == ai:
                k = j2len.get(j - 1, 0) + 1
                newj2len[j] = k
                if k > bestsize:
                    besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def _match_total(a: str, b: str) -> int:
    total = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        if alo >= ahi or blo >= bhi:
            continue
        i, j, k = _longest_block(a, b, alo, ahi, blo, bhi)
        if k:
            total += k
            stack.append((alo, i, blo, j))
            stack.append((i + k, ahi, j + k, bhi))
    return total


def ratio(a: str, b: str) -> float:
    t = len(a) + len(b)
    if t == 0:
        return 1.0
    return 2.0 * _match_total(a, b) / t


def prepare_bucket(words: list[str]):
    """Bucket snapshot for scan_bucket; the pure kernel scans the list as-is."""
    return words


def prepare_query(query: str):
    counts: dict[str, int] = {}
    for ch in query:
        counts[ch] = counts.get(ch, 0) + 1
    return query, counts


def scan_bucket(prepared, query_prep, cutoff: float):
    """All (index, score) pairs in the bucket with ratio >= cutoff.

    A character-multiset intersection gives an upper bound on the ratio and
    skips most of the bucket before the exact score is computed.
    """
    query, qcounts = query_prep
    la = len(query)
    out = []
    for idx, word in enumerate(prepared):
        t = la + len(word)
        if t == 0:
            if cutoff <= 1.0:
                out.append((idx, 1.0))
            continue
        seen: dict[str, int] = {}
        inter = 0
        for ch in word:
            have = seen.get(ch, 0)
            if have < qcounts.get(ch, 0):
                inter += 1
                seen[ch] = have + 1
        if 2.0 * inter / t < cutoff:
            continue
        score = 2.0 * _match_total(query, word) / t
        if score >= cutoff:
            out.append((idx, score))
    return out
