"""Guess selection among consistent codes and the single-game loop.

Every kind except ``random`` scores candidates by the partition they induce
on the current consistent set (or, for ``local-entropy``, by symbol
statistics) and draws uniformly among the best-scoring ones. With a
subset cap ``mu`` the strategy only ever looks at a uniform sample of at most
``mu`` consistent codes: the sample supplies the candidates and is also the
set their partitions are computed over.
"""

from __future__ import annotations

import enum
import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

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
)
from mmlab.partition import score_arrays

REL_TIE_TOL = 1e-9
SEED_MASK = (1 << 64) - 1


class StrategyKind(str, enum.Enum):
    RANDOM = "random"
    ENTROPY = "entropy"
    MOST_PARTS = "most-parts"
    EXPECTED_SIZE = "expected-size"
    WORST_CASE = "worst-case"
    LOCAL_ENTROPY = "local-entropy"

    @property
    def stream_id(self) -> int:
        return zlib.crc32(self.value.encode())


def aabc_guess(alphabet: Alphabet) -> Code:
    """The ``AABC...`` opening stretched or cut to the alphabet."""
    pattern = [0, 0] + list(range(1, alphabet.ell))
    return tuple(min(s, alphabet.kappa - 1) for s in pattern[: alphabet.ell])


def aabb_guess(alphabet: Alphabet) -> Code:
    return tuple(min(i // 2, alphabet.kappa - 1) for i in range(alphabet.ell))


@dataclass(frozen=True)
class StrategyConfig:
    kind: StrategyKind
    subset_cap: int | None = None
    first_guess: Code | None = None
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.subset_cap is not None and self.subset_cap < 1:
            raise InvalidInputError("subset cap must be >= 1")
        if self.first_guess is not None:
            object.__setattr__(self, "first_guess", tuple(self.first_guess))

    @property
    def label(self) -> str:
        return self.kind.value

    @property
    def mu(self) -> str:
        return "inf" if self.subset_cap is None else str(self.subset_cap)

    @property
    def stream_id(self) -> int:
        return self.kind.stream_id

    def opening(self, alphabet: Alphabet) -> Code:
        if self.first_guess is None:
            return aabc_guess(alphabet)
        return alphabet.validate(self.first_guess)


def game_rng(master_seed: int, stream_id: int, secret_index: int, repetition: int) -> np.random.Generator:
    """Independent stream per (seed, strategy, secret, repetition) work unit."""
    return np.random.default_rng([master_seed & SEED_MASK, stream_id, secret_index, repetition])


def sample_subset(consistent_set: Sequence, mu: int, rng: np.random.Generator):
    """Uniform ``mu``-subset without replacement, original order kept.

    Sets no larger than ``mu`` come back whole and leave ``rng`` untouched.
    """
    if mu < 1:
        raise InvalidInputError("mu must be >= 1")
    n = len(consistent_set)
    if n <= mu:
        return consistent_set
    picked = np.sort(rng.choice(n, size=mu, replace=False))
    if isinstance(consistent_set, np.ndarray):
        return consistent_set[picked]
    return [consistent_set[i] for i in picked]


def _argbest(values: np.ndarray, maximize: bool, rel_tol: float | None = None) -> np.ndarray:
    best = values.max() if maximize else values.min()
    if rel_tol is None:
        return np.flatnonzero(values == best)
    slack = rel_tol * abs(best)
    if maximize:
        return np.flatnonzero(values >= best - slack)
    return np.flatnonzero(values <= best + slack)


def symbol_entropy(counts: np.ndarray) -> np.ndarray:
    """Natural-log Shannon entropy of each row of symbol counts."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(counts > 0, counts / total * np.log(total / counts), 0.0)
    return terms.sum(axis=-1)


def tied_best(
    space: CodeSpace,
    kind: StrategyKind,
    candidates: np.ndarray,
    consistent: np.ndarray,
    played: Sequence[int] = (),
) -> np.ndarray:
    """Members of ``candidates`` sharing the best score, before tie-breaking."""
    key_played = tuple(played) if kind is StrategyKind.LOCAL_ENTROPY else ()
    return _tied_best_cached(
        space, kind, candidates.tobytes(), consistent.tobytes(), key_played
    )


@lru_cache(maxsize=1 << 16)
def _tied_best_cached(space, kind, cand_bytes, cons_bytes, played):
    candidates = np.frombuffer(cand_bytes, dtype=np.int64)
    consistent = np.frombuffer(cons_bytes, dtype=np.int64)
    if kind is StrategyKind.RANDOM:
        return candidates
    if kind is StrategyKind.LOCAL_ENTROPY:
        base = space.counts[list(played)].sum(axis=0) if played else 0
        values = symbol_entropy(space.counts[candidates].astype(np.int64) + base)
        return candidates[_argbest(values, True, REL_TIE_TOL)]
    s = score_arrays(space, candidates, consistent)
    if kind is StrategyKind.ENTROPY:
        pick = _argbest(s.entropy, True, REL_TIE_TOL)
    elif kind is StrategyKind.MOST_PARTS:
        pick = _argbest(s.parts, True)
    elif kind is StrategyKind.EXPECTED_SIZE:
        pick = _argbest(s.sum_sq, False)
    else:
        pick = _argbest(s.worst, False)
    return candidates[pick]


def choose_index(
    config: StrategyConfig,
    space: CodeSpace,
    played: Sequence[int],
    consistent: np.ndarray,
    rng: np.random.Generator,
) -> int:
    """Index-level core of :func:`select_guess`."""
    if not played:
        return space.alphabet.index(config.opening(space.alphabet))
    n = len(consistent)
    if n == 0:
        raise ContradictionError("no code is consistent with the responses so far")
    if n == 1:
        return int(consistent[0])
    # a capped strategy sees only its sample: candidates and the set they split
    candidates = consistent
    if config.subset_cap is not None:
        candidates = sample_subset(consistent, config.subset_cap, rng)
    tied = tied_best(space, config.kind, candidates, candidates, played)
    if len(tied) == 1:
        return int(tied[0])
    return int(tied[rng.integers(len(tied))])


def select_guess(
    config: StrategyConfig,
    history: GameHistory,
    consistent_set: Sequence[Sequence[int]],
    rng: np.random.Generator,
    alphabet: Alphabet | None = None,
) -> Code:
    alphabet = alphabet or Alphabet()
    space = code_space(alphabet)
    played = [alphabet.index(g) for g in history.guesses]
    consistent = np.array([alphabet.index(c) for c in consistent_set], dtype=np.int64)
    if played and len(consistent) == 0:
        raise ContradictionError("no code is consistent with the responses so far")
    return alphabet.code(choose_index(config, space, played, consistent, rng))


@dataclass
class GameResult:
    guess_count: int
    history: GameHistory
    solved: bool = True
    guesses: list[int] = field(default_factory=list, repr=False)


Chooser = Callable[[list[int], list[int], np.ndarray], int]


def run_game(space: CodeSpace, secret: int, chooser: Chooser, cap: int = DEFAULT_GUESS_CAP) -> GameResult:
    """Play until the secret is hit or ``cap`` guesses are spent.

    ``chooser(played, responses, consistent)`` gets the played code indices,
    their encoded responses and the index array of codes consistent with
    every response so far.
    """
    alphabet = space.alphabet
    consistent = space.all_indices()
    played: list[int] = []
    responses: list[int] = []
    turns = []
    solved = False
    while len(played) < cap:
        guess = chooser(played, responses, consistent)
        if guess in played:
            raise RuntimeError(f"guess {alphabet.render(alphabet.code(guess))} repeated")
        response = int(space.responses(guess, np.array([secret]))[0])
        played.append(guess)
        responses.append(response)
        turns.append((alphabet.code(guess), alphabet.decode(response)))
        if response == space.win_code:
            solved = True
            break
        consistent = space.narrow(consistent, guess, response)
    return GameResult(len(played), GameHistory(tuple(turns), cap), solved, played)


def play_game(
    config: StrategyConfig,
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
        lambda played, _, consistent: choose_index(config, space, played, consistent, rng),
        cap,
    )


def play_scripted(guesses: Sequence[Sequence[int]], secret: Sequence[int], alphabet: Alphabet) -> GameResult:
    """Replay a fixed guess sequence, e.g. a recorded game."""
    space = code_space(alphabet)
    order = [alphabet.index(g) for g in guesses]
    return run_game(space, alphabet.index(secret), lambda played, *_: order[len(played)], len(order))


def parse_strategy(name: str) -> StrategyKind:
    try:
        return StrategyKind(name.strip().lower().replace("_", "-"))
    except ValueError:
        names = ", ".join(k.value for k in StrategyKind)
        raise InvalidInputError(f"unknown strategy {name!r}; choose from {names}") from None


def parse_mu(text: str) -> int | None:
    text = text.strip().lower()
    if text.startswith("mu="):
        text = text[3:]
    if text in ("inf", "infinity", "none"):
        return None
    try:
        mu = int(text)
    except ValueError:
        raise InvalidInputError(f"bad subset cap {text!r}") from None
    if mu < 1:
        raise InvalidInputError("subset cap must be >= 1")
    return mu

