"""Benchmark the compiled similarity kernel against the pure-Python fallback.

Builds a synthetic lexicon, runs top-k closest-match queries through each
backend, and prints per-query latency plus the speedup.  Run from the repo
root:

    python3 benchmarks/bench_kernels.py --words 100000 --queries 40
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from ocrpost import _pyfallback
from ocrpost.lexicon import Lexicon, Match

try:
    from ocrpost import _speedups
except ImportError:
    _speedups = None

ALPHABET = "abcdefghijklmnoprstuvwy"


def synth_words(count: int, seed: int) -> set[str]:
    rng = random.Random(seed)
    words: set[str] = set()
    while len(words) < count:
        n = rng.randrange(3, 13)
        words.add("".join(rng.choice(ALPHABET) for _ in range(n)))
    return words


def close_matches_with(backend, lex: Lexicon, word: str, k: int, cutoff: float):
    qprep = backend.prepare_query(word)
    prepared = {
        length: backend.prepare_bucket(bucket)
        for length, bucket in lex.length_buckets.items()
    }
    found = []
    for length in sorted(lex.length_buckets):
        total = len(word) + length
        if total and 2.0 * min(len(word), length) / total < cutoff:
            continue
        bucket = lex.length_buckets[length]
        for idx, score in backend.scan_bucket(prepared[length], qprep, cutoff):
            found.append((score, bucket[idx]))
    found.sort(key=lambda pair: (-pair[0], pair[1]))
    return [Match(word=w, score=s) for s, w in found[:k]]


def bench(backend, lex: Lexicon, queries: list[str], k: int, cutoff: float):
    prepared = {
        length: backend.prepare_bucket(bucket)
        for length, bucket in lex.length_buckets.items()
    }
    timings = []
    results = []
    for query in queries:
        qprep = backend.prepare_query(query)
        start = time.perf_counter()
        found = []
        for length in sorted(lex.length_buckets):
            total = len(query) + length
            if total and 2.0 * min(len(query), length) / total < cutoff:
                continue
            bucket = lex.length_buckets[length]
            for idx, score in backend.scan_bucket(prepared[length], qprep, cutoff):
                found.append((score, bucket[idx]))
        found.sort(key=lambda pair: (-pair[0], pair[1]))
        results.append(found[:k])
        timings.append(time.perf_counter() - start)
    return timings, results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", type=int, default=100_000)
    parser.add_argument("--queries", type=int, default=40)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--cutoff", type=float, default=0.6)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    words = synth_words(args.words, args.seed)
    lex = Lexicon(words, [("synthetic", len(words))])
    rng = random.Random(args.seed + 1)
    queries = [
        "".join(rng.choice(ALPHABET) for _ in range(rng.randrange(4, 11)))
        for _ in range(args.queries)
    ]

    print(f"lexicon: {len(lex)} words, {args.queries} queries, "
          f"k={args.k} cutoff={args.cutoff}")

    pure_times, pure_results = bench(_pyfallback, lex, queries, args.k, args.cutoff)
    pure_med = statistics.median(pure_times)
    print(f"pure    backend: median {pure_med * 1e3:8.2f} ms/query "
          f"(total {sum(pure_times):.2f}s)")

    if _speedups is None:
        print("native backend: extension not built (python3 setup.py build_ext "
              "--inplace)")
        return

    nat_times, nat_results = bench(_speedups, lex, queries, args.k, args.cutoff)
    nat_med = statistics.median(nat_times)
    print(f"native  backend: median {nat_med * 1e3:8.2f} ms/query "
          f"(total {sum(nat_times):.2f}s)")

    if nat_results != pure_results:
        raise SystemExit("backend results diverge; kernels are out of sync")
    print(f"results identical across backends; speedup x{pure_med / nat_med:.1f}")


if __name__ == "__main__":
    main()
