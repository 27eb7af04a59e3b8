"""Two-sided Wilcoxon rank-sum test and mean-ordered significance grouping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

EXACT_MAX_N = 10


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_p(doubled: list[int], n: int, observed: int) -> float:
    """P(|S - E| >= |s_obs - E|) where S is the sum of ``n`` of the doubled
    ranks drawn without replacement, by dynamic programming over subsets."""
    total_n = len(doubled)
    expected = n * (total_n + 1)
    # ways[k][s]: number of k-subsets of the ranks seen so far with doubled sum s
    ways: list[dict[int, int]] = [dict() for _ in range(n + 1)]
    ways[0][0] = 1
    for r in doubled:
        for k in range(min(n, total_n) - 1, -1, -1):
            for s, w in ways[k].items():
                ways[k + 1][s + r] = ways[k + 1].get(s + r, 0) + w
    extreme = abs(observed - expected)
    hits = sum(w for s, w in ways[n].items() if abs(s - expected) >= extreme)
    return min(1.0, hits / math.comb(total_n, n))


def _normal_p(ranks: np.ndarray, n: int, m: int) -> float:
    total_n = n + m
    u = ranks[:n].sum() - n * (n + 1) / 2
    _, ties = np.unique(ranks, return_counts=True)
    tie_term = (ties**3 - ties).sum() / (total_n * (total_n - 1))
    var = n * m / 12 * ((total_n + 1) - tie_term)
    if var <= 0:
        return 1.0
    z = max(abs(u - n * m / 2) - 0.5, 0.0) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2)))


def wilcoxon_rank_sum(xs: Sequence[float], ys: Sequence[float], exact: bool | None = None) -> float:
    """Two-sided p-value of the rank-sum test.

    Exact (tie-aware permutation distribution) when both samples have at most
    ten values, otherwise the tie-corrected normal approximation with a
    continuity correction.
    """
    n, m = len(xs), len(ys)
    if n == 0 or m == 0:
        raise ValueError("both samples must be non-empty")
    ranks = midranks(list(xs) + list(ys))
    if exact is None:
        exact = max(n, m) <= EXACT_MAX_N
    if exact:
        doubled = [int(round(2 * r)) for r in ranks]
        return _exact_p(doubled, n, sum(doubled[:n]))
    return _normal_p(ranks, n, m)


def enumerated_rank_sum_p(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Reference p-value by listing every assignment of pooled ranks to ``xs``."""
    ranks = midranks(list(xs) + list(ys))
    n, total_n = len(xs), len(xs) + len(ys)
    expected = n * (total_n + 1) / 2
    observed = abs(ranks[:n].sum() - expected)
    hits = count = 0
    for idx in combinations(range(total_n), n):
        count += 1
        if abs(ranks[list(idx)].sum() - expected) >= observed - 1e-9:
            hits += 1
    return hits / count


@dataclass
class SignificanceGroup:
    labels: list[str]
    pairwise_p: np.ndarray
    groups: list[list[str]]

    def p(self, a: str, b: str) -> float:
        return float(self.pairwise_p[self.labels.index(a), self.labels.index(b)])

    def group_of(self, label: str) -> int:
        return next(i for i, g in enumerate(self.groups) if label in g)

    def to_dict(self) -> dict:
        return {
            "labels": self.labels,
            "pairwise_p": self.pairwise_p.tolist(),
            "groups": self.groups,
        }


def group_samples(samples: Mapping[str, Sequence[float]], alpha: float = 0.05) -> SignificanceGroup:
    """Order by mean and chain neighbours whose difference is not significant."""
    if len(samples) < 2:
        raise ValueError("need at least two samples to group")
    labels = sorted(samples, key=lambda k: (float(np.mean(samples[k])), k))
    k = len(labels)
    p = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            p[i, j] = p[j, i] = wilcoxon_rank_sum(samples[labels[i]], samples[labels[j]])
    groups = [[labels[0]]]
    for i in range(1, k):
        if p[i - 1, i] >= alpha:
            groups[-1].append(labels[i])
        else:
            groups.append([labels[i]])
    return SignificanceGroup(labels, p, groups)
