# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gestalt similarity kernels.

Same contract as ocrpost._pyfallback, but words are pre-encoded into flat
little-endian codepoint arrays so the inner loops run on C integers.  Scores
must stay bit-identical to the fallback: both compute 2*M/T with M the total
matching-block length from longest-block decomposition, breaking block ties
toward the earliest start in the first string, then in the second.
"""

from array import array

from libc.stdlib cimport free, malloc
from libc.string cimport memset

BACKEND = "native"

cdef struct Region:
    int alo
    int ahi
    int blo
    int bhi


cdef int _longest_block(const int* a, const int* b,
                        int alo, int ahi, int blo, int bhi,
                        int* cur, int* nxt,
                        int* out_i, int* out_j) noexcept nogil:
    """Longest block a[i:i+k] == b[j:j+k] inside the window.

    cur/nxt are scratch rows of at least (bhi - blo + 1) ints; slot o+1
    holds the running match length ending at b-offset o, slot 0 is the
    sentinel for "one left of the window".
    """
    cdef int besti = alo
    cdef int bestj = blo
    cdef int bestsize = 0
    cdef int width = bhi - blo
    cdef int i, j, o, k, ai
    cdef int* swap
    memset(cur, 0, (width + 1) * sizeof(int))
    for i in range(alo, ahi):
        memset(nxt, 0, (width + 1) * sizeof(int))
        ai = a[i]
        for o in range(width):
            j = blo + o
            if b[j] == ai:
                k = cur[o] + 1
                nxt[o + 1] = k
                if k > bestsize:
                    besti = i - k + 1
                    bestj = j - k + 1
                    bestsize = k
        swap = cur
        cur = nxt
        nxt = swap
    out_i[0] = besti
    out_j[0] = bestj
    return bestsize


cdef long _match_total(const int* a, int la, const int* b, int lb,
                       int* row0, int* row1, Region* stack) noexcept nogil:
    cdef long total = 0
    cdef int sp = 1
    cdef int alo, ahi, blo, bhi, bi, bj, k
    stack[0].alo = 0
    stack[0].ahi = la
    stack[0].blo = 0
    stack[0].bhi = lb
    while sp:
        sp -= 1
        alo = stack[sp].alo
        ahi = stack[sp].ahi
        blo = stack[sp].blo
        bhi = stack[sp].bhi
        if alo >= ahi or blo >= bhi:
            continue
        k = _longest_block(a, b, alo, ahi, blo, bhi, row0, row1, &bi, &bj)
        if k:
            total += k
            stack[sp].alo = alo
            stack[sp].ahi = bi
            stack[sp].blo = blo
            stack[sp].bhi = bj
            sp += 1
            stack[sp].alo = bi + k
            stack[sp].ahi = ahi
            stack[sp].blo = bj + k
            stack[sp].bhi = bhi
            sp += 1
    return total


def _codes(text: str):
    # utf-32-le yields one native-endian int32 codepoint per character
    out = array("i")
    out.frombytes(text.encode("utf-32-le"))
    return out


def ratio(a: str, b: str) -> float:
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t t = la + lb
    if t == 0:
        return 1.0
    if la == 0 or lb == 0:
        return 0.0
    acodes = _codes(a)
    bcodes = _codes(b)
    cdef int[::1] av = acodes
    cdef int[::1] bv = bcodes
    cdef int mn = <int>(la if la < lb else lb)
    cdef int* row0 = <int*>malloc((lb + 2) * sizeof(int))
    cdef int* row1 = <int*>malloc((lb + 2) * sizeof(int))
    cdef Region* stack = <Region*>malloc((2 * mn + 4) * sizeof(Region))
    if row0 == NULL or row1 == NULL or stack == NULL:
        free(row0)
        free(row1)
        free(stack)
        raise MemoryError
    cdef long m
    try:
        m = _match_total(&av[0], <int>la, &bv[0], <int>lb, row0, row1, stack)
    finally:
        free(row0)
        free(row1)
        free(stack)
    return 2.0 * m / t


def prepare_bucket(words):
    """Pack a same-length word list into one flat codepoint array."""
    cdef Py_ssize_t n = len(words)
    if n == 0:
        return (array("i"), 0, 0)
    wlen = len(words[0])
    for w in words:
        if len(w) != wlen:
            raise ValueError("bucket words must share one length")
    flat = _codes("".join(words))
    return (flat, wlen, n)


def prepare_query(query: str):
    qcodes = _codes(query)
    counts = array("i", bytes(4 * 1024))
    cdef int[::1] cv = counts
    cdef int[::1] qv = qcodes
    cdef Py_ssize_t i
    for i in range(len(query)):
        cv[qv[i] & 1023] += 1
    return (qcodes, counts, len(query))


def scan_bucket(prepared, query_prep, double cutoff):
    """All (index, score) pairs in the bucket with ratio >= cutoff.

    Pruning: a character-multiset intersection (1024-way folded, so any
    collision only raises the bound) upper-bounds the ratio per word.
    """
    flat_obj, wlen_obj, n_obj = prepared
    qcodes_obj, qcnt_obj, la_obj = query_prep
    cdef int wlen = wlen_obj
    cdef Py_ssize_t n = n_obj
    cdef int la = la_obj
    cdef int t = la + wlen
    out = []
    if n == 0:
        return out
    if t == 0:
        if cutoff <= 1.0:
            return [(i, 1.0) for i in range(n)]
        return out
    if la == 0 or wlen == 0:
        if cutoff <= 0.0:
            return [(i, 0.0) for i in range(n)]
        return out

    cdef int[::1] flat = flat_obj
    cdef int[::1] qcodes = qcodes_obj
    cdef int[::1] qcnt = qcnt_obj
    cdef int mn = la if la < wlen else wlen
    cdef int* row0 = <int*>malloc((wlen + 2) * sizeof(int))
    cdef int* row1 = <int*>malloc((wlen + 2) * sizeof(int))
    cdef Region* stack = <Region*>malloc((2 * mn + 4) * sizeof(Region))
    cdef int* seen = <int*>malloc(1024 * sizeof(int))
    if row0 == NULL or row1 == NULL or stack == NULL or seen == NULL:
        free(row0)
        free(row1)
        free(stack)
        free(seen)
        raise MemoryError
    memset(seen, 0, 1024 * sizeof(int))

    cdef Py_ssize_t w, base
    cdef int p, c, inter
    cdef long m
    cdef double score
    try:
        for w in range(n):
            base = w * wlen
            inter = 0
            for p in range(wlen):
                c = flat[base + p] & 1023
                if seen[c] < qcnt[c]:
                    inter += 1
                    seen[c] += 1
            for p in range(wlen):
                seen[flat[base + p] & 1023] = 0
            if 2.0 * inter / t < cutoff:
                continue
            m = _match_total(&qcodes[0], la, &flat[base], wlen, row0, row1, stack)
            score = 2.0 * m / t
            if score >= cutoff:
                out.append((w, score))
    finally:
        free(row0)
        free(row1)
        free(stack)
        free(seen)
    return out
