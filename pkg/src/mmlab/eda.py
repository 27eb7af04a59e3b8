"""Univariate estimation-of-distribution solver that plays the first consistent
combinations it finds.

Each turn a fresh population is evolved until some individual is consistent
with all responses so far; that generation's best consistent individual is
played. Two fitness functions are available: plain distance to consistency,
and local entropy divided by one plus that distance.
"""

from __future__ import annotations

import enum
import logging
import math
import zlib
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mmlab.codes import (
    DEFAULT_GUESS_CAP,
    Alphabet,
    Code,
    CodeSpace,
    ContradictionError,
    GameHistory,
    InvalidInputError,
    code_space,
    feedback,
)
from mmlab.strategies import REL_TIE_TOL, GameResult, game_rng, run_game, symbol_entropy

log = logging.getLogger(__name__)


class FitnessKind(str, enum.Enum):
    CONSISTENCY_ONLY = "f"
    LOCAL_ENTROPY_BIASED = "f_ell"


@dataclass(frozen=True)
class EdaConfig:
    population_size: int = 200
    replacement_rate: float = 0.5
    fitness_kind: FitnessKind = FitnessKind.LOCAL_ENTROPY_BIASED
    max_generations_per_turn: int = 500
    rng_seed: int = 0
    first_guess: Code | None = None

    def __post_init__(self):
        object.__setattr__(self, "fitness_kind", FitnessKind(self.fitness_kind))
        if self.population_size < 2:
            raise InvalidInputError("population_size must be >= 2")
        if not 0 < self.replacement_rate <= 1:
            raise InvalidInputError("replacement_rate must lie in (0, 1]")
        if self.n_replaced < 1:
            raise InvalidInputError("replacement_rate * population_size must be >= 1")
        if self.max_generations_per_turn < 1:
            raise InvalidInputError("max_generations_per_turn must be >= 1")

    @property
    def n_replaced(self) -> int:
        return int(round(self.replacement_rate * self.population_size))

    @property
    def label(self) -> str:
        return "eda-fl" if self.fitness_kind is FitnessKind.LOCAL_ENTROPY_BIASED else "eda-f"

    @property
    def mu(self) -> str:
        return "inf"

    @property
    def stream_id(self) -> int:
        return zlib.crc32(self.label.encode())

    def opening(self, alphabet: Alphabet) -> Code:
        if self.first_guess is None:
            return tuple(min(i // 2, alphabet.kappa - 1) for i in range(alphabet.ell))
        return alphabet.validate(self.first_guess)


@dataclass
class MarginalModel:
    """Independent categorical distribution per code position."""

    probs: np.ndarray

    @classmethod
    def uniform(cls, alphabet: Alphabet) -> "MarginalModel":
        return cls(np.full((alphabet.ell, alphabet.kappa), 1.0 / alphabet.kappa))

    @classmethod
    def fit(cls, symbols: np.ndarray, kappa: int, smoothing: float) -> "MarginalModel":
        """Smoothed per-position frequencies of the rows of ``symbols``."""
        ell = symbols.shape[1]
        flat = (symbols.astype(np.int64) + kappa * np.arange(ell)).ravel()
        counts = np.bincount(flat, minlength=ell * kappa).reshape(ell, kappa) + smoothing
        return cls(counts / counts.sum(axis=1, keepdims=True))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        cum = np.cumsum(self.probs, axis=1)
        u = rng.random((n, self.probs.shape[0]))
        sym = (u[:, :, None] >= cum[None, :, :]).sum(axis=2)
        return np.minimum(sym, self.probs.shape[1] - 1)


def fitness_f(candidate: Sequence[int], history: GameHistory) -> int:
    """Total black/white distance between the candidate's hypothetical
    responses and the recorded ones; zero exactly for consistent codes."""
    total = 0
    for guess, fb in history:
        got = feedback(guess, candidate)
        total += abs(got.black - fb[0]) + abs(got.white - fb[1])
    return total


def local_entropy(candidate: Sequence[int], history: GameHistory) -> float:
    """Shannon entropy (nats) of the symbol frequencies of the candidate
    concatenated with every played guess."""
    counts = Counter(candidate)
    for guess, _ in history:
        counts.update(guess)
    n = sum(counts.values())
    return sum(c / n * math.log(n / c) for c in counts.values())


def fitness_f_ell(candidate: Sequence[int], history: GameHistory) -> float:
    return local_entropy(candidate, history) / (1 + fitness_f(candidate, history))


class _TurnSolver:
    """Vectorized fitness for one turn's fixed history."""

    def __init__(self, config: EdaConfig, space: CodeSpace, played: Sequence[int], responses: Sequence[int]):
        self.config = config
        self.space = space
        self.played = np.asarray(played, dtype=np.int64)
        base = space.alphabet.ell + 1
        resp = np.asarray(responses, dtype=np.int64)
        self.black, self.white = resp // base, resp % base
        self.hist_counts = space.counts[self.played].astype(np.int64).sum(axis=0)
        self.powers = space.alphabet.kappa ** np.arange(space.alphabet.ell - 1, -1, -1)
        # small spaces: score every code once per turn, then index
        self._dist_all = self._ent_all = None
        if space.table is not None:
            everything = space.all_indices()
            self._dist_all = self._distance(everything)
            self._ent_all = self._local_entropy(everything)

    def distance(self, pop: np.ndarray) -> np.ndarray:
        if self._dist_all is not None:
            return self._dist_all[pop]
        return self._distance(pop)

    def local_entropy(self, pop: np.ndarray) -> np.ndarray:
        if self._ent_all is not None:
            return self._ent_all[pop]
        return self._local_entropy(pop)

    def _distance(self, pop: np.ndarray) -> np.ndarray:
        resp = self.space.matrix(self.played, pop).astype(np.int64)
        base = self.space.alphabet.ell + 1
        b, w = resp // base, resp % base
        return (np.abs(b - self.black[:, None]) + np.abs(w - self.white[:, None])).sum(axis=0)

    def _local_entropy(self, pop: np.ndarray) -> np.ndarray:
        return symbol_entropy(self.space.counts[pop].astype(np.int64) + self.hist_counts)

    def to_index(self, symbols: np.ndarray) -> np.ndarray:
        return symbols.astype(np.int64) @ self.powers

    def evolve(self, rng: np.random.Generator) -> np.ndarray | None:
        """Consistent individuals of the first generation that has any, or
        ``None`` when the generation budget runs out."""
        cfg, space = self.config, self.space
        alphabet = space.alphabet
        n_keep = cfg.population_size - cfg.n_replaced
        n_sel = max(1, cfg.population_size // 2)
        smoothing = 1.0 / (cfg.population_size * alphabet.kappa)
        pop = rng.integers(space.size, size=cfg.population_size)
        for _ in range(cfg.max_generations_per_turn):
            dist = self.distance(pop)
            hits = dist == 0
            if hits.any():
                return np.unique(pop[hits])
            if cfg.fitness_kind is FitnessKind.LOCAL_ENTROPY_BIASED:
                key = -self.local_entropy(pop) / (1 + dist)
            else:
                key = dist
            shuffle = rng.permutation(len(pop))
            order = shuffle[np.argsort(key[shuffle], kind="stable")]
            model = MarginalModel.fit(space.symbols[pop[order[:n_sel]]], alphabet.kappa, smoothing)
            fresh = self.to_index(model.sample(rng, cfg.n_replaced))
            pop = np.concatenate([pop[order[:n_keep]], fresh])
        return None

    def choose(self, found: np.ndarray, rng: np.random.Generator) -> int:
        if self.config.fitness_kind is FitnessKind.LOCAL_ENTROPY_BIASED:
            ent = self.local_entropy(found)
            best = ent.max()
            found = found[ent >= best - REL_TIE_TOL * best]
        return int(found[rng.integers(len(found))])


def eda_choose_index(
    config: EdaConfig,
    space: CodeSpace,
    played: Sequence[int],
    responses: Sequence[int],
    rng: np.random.Generator,
    consistent: np.ndarray | None = None,
) -> int:
    if not played:
        return space.alphabet.index(config.opening(space.alphabet))
    solver = _TurnSolver(config, space, played, responses)
    for attempt in range(2):
        found = solver.evolve(rng)
        if found is not None:
            return solver.choose(found, rng)
        log.debug("EDA stalled (attempt %d), restarting from the uniform model", attempt + 1)
    if consistent is None:
        everything = space.all_indices()
        consistent = everything[solver.distance(everything) == 0]
    if len(consistent) == 0:
        raise ContradictionError("no code is consistent with the responses so far")
    log.info("EDA fell back to exhaustive search after %d turns", len(played))
    return int(consistent[rng.integers(len(consistent))])


def eda_select_guess(
    config: EdaConfig,
    history: GameHistory,
    rng: np.random.Generator,
    alphabet: Alphabet | None = None,
) -> Code:
    alphabet = alphabet or Alphabet()
    space = code_space(alphabet)
    played = [alphabet.index(g) for g, _ in history]
    responses = [alphabet.encode(fb) for _, fb in history]
    return alphabet.code(eda_choose_index(config, space, played, responses, rng))


def play_eda_game(
    config: EdaConfig,
    secret: Sequence[int],
    alphabet: Alphabet,
    repetition: int = 0,
    rng: np.random.Generator | None = None,
    cap: int = DEFAULT_GUESS_CAP,
) -> GameResult:
    space = code_space(alphabet)
    secret_idx = alphabet.index(secret)
    if rng is None:
        rng = game_rng(config.rng_seed, config.stream_id, secret_idx, repetition)
    return run_game(
        space,
        secret_idx,
        lambda played, responses, consistent: eda_choose_index(
            config, space, played, responses, rng, consistent
        ),
        cap,
    )
