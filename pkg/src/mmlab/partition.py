"""Partitions of the consistent set induced by a candidate guess, and their scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from mmlab.codes import CodeSpace, ContradictionError, Feedback, feedback


@dataclass(frozen=True)
class PartitionTable:
    counts: Mapping[Feedback, int]
    total: int

    def __post_init__(self):
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("empty partitions must be omitted")
        if sum(self.counts.values()) != self.total:
            raise ValueError("partition counts do not sum to the total")


@dataclass(frozen=True)
class GuessScore:
    entropy: float
    nonempty_parts: int
    expected_size: float
    worst_size: int


def partition(guess: Sequence[int], consistent_set: Sequence[Sequence[int]]) -> PartitionTable:
    if not consistent_set:
        raise ContradictionError("cannot partition an empty consistent set")
    counts: dict[Feedback, int] = {}
    for c in consistent_set:
        f = feedback(guess, c)
        counts[f] = counts.get(f, 0) + 1
    return PartitionTable(counts, len(consistent_set))


def score(table: PartitionTable) -> GuessScore:
    total = table.total
    sizes = list(table.counts.values())
    entropy = sum(c / total * math.log2(total / c) for c in sizes)
    return GuessScore(
        entropy=entropy,
        nonempty_parts=len(sizes),
        expected_size=sum(c * c for c in sizes) / total,
        worst_size=max(sizes),
    )


@dataclass(frozen=True)
class ScoreArrays:
    """Scores of many candidates at once; ``sum_sq / total`` is the expected size."""

    entropy: np.ndarray
    parts: np.ndarray
    sum_sq: np.ndarray
    worst: np.ndarray
    total: int

    @property
    def expected_size(self) -> np.ndarray:
        return self.sum_sq / self.total


def partition_counts(space: CodeSpace, candidates: np.ndarray, consistent: np.ndarray) -> np.ndarray:
    """Row ``i`` holds the partition sizes of ``consistent`` under ``candidates[i]``,
    one column per encoded response."""
    if len(consistent) == 0:
        raise ContradictionError("cannot partition an empty consistent set")
    k = space.n_responses
    resp = space.matrix(candidates, consistent).astype(np.int64)
    resp += (np.arange(len(candidates)) * k)[:, None]
    return np.bincount(resp.ravel(), minlength=len(candidates) * k).reshape(len(candidates), k)


def scores_from_counts(counts: np.ndarray) -> ScoreArrays:
    """Scores for each row of a partition-count matrix (rows share one total)."""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts[0].sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        clog = np.where(counts > 0, counts * np.log2(counts), 0.0)
    entropy = math.log2(total) - clog.sum(axis=1) / total
    return ScoreArrays(
        entropy=np.maximum(entropy, 0.0),
        parts=(counts > 0).sum(axis=1),
        sum_sq=(counts * counts).sum(axis=1),
        worst=counts.max(axis=1),
        total=total,
    )


def score_arrays(space: CodeSpace, candidates: np.ndarray, consistent: np.ndarray) -> ScoreArrays:
    return scores_from_counts(partition_counts(space, candidates, consistent))
