"""Naive reference implementations used as test oracles.

Nothing here touches the vectorized code space or the score arrays; every
value is recomputed from scratch with plain Python.
"""

import itertools
import math
from collections import Counter


def naive_feedback(guess, secret):
    black = 0
    rest_g, rest_s = [], []
    for g, s in zip(guess, secret):
        if g == s:
            black += 1
        else:
            rest_g.append(g)
            rest_s.append(s)
    white = 0
    for g in rest_g:
        if g in rest_s:
            rest_s.remove(g)
            white += 1
    return (black, white)


def all_codes(kappa, ell):
    return list(itertools.product(range(kappa), repeat=ell))


def naive_consistent(codes, history):
    return [c for c in codes if all(naive_feedback(g, c) == tuple(f) for g, f in history)]


def naive_partition(guess, pool):
    return Counter(naive_feedback(guess, c) for c in pool)


def naive_best(kind, candidates, pool, played=()):
    """Set of candidates with the best score (ties kept)."""
    def key(c):
        sizes = list(naive_partition(c, pool).values())
        n = len(pool)
        if kind == "entropy":
            return -sum(s / n * math.log2(n / s) for s in sizes)
        if kind == "most-parts":
            return -len(sizes)
        if kind == "expected-size":
            return sum(s * s for s in sizes) / n
        if kind == "worst-case":
            return max(sizes)
        if kind == "local-entropy":
            counts = Counter(c)
            for g in played:
                counts.update(g)
            m = sum(counts.values())
            return -sum(v / m * math.log(m / v) for v in counts.values())
        if kind == "random":
            return 0
        raise ValueError(kind)

    scores = {c: key(c) for c in candidates}
    best = min(scores.values())
    return {c for c, v in scores.items() if v <= best + 1e-9 * max(abs(best), 1e-12)}
