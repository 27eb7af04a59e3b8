"""Codes, the black/white response function and the consistency predicate.

Symbols are integer indices ``0..kappa-1``; the letters ``A, B, ...`` only
appear at the text boundary (:meth:`Alphabet.parse` / :meth:`Alphabet.render`).
Inside the hot loops codes are addressed by their position in the
lexicographic enumeration of the space, see :class:`CodeSpace`.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Code = tuple[int, ...]

DEFAULT_SPACE_LIMIT = 10**7
DEFAULT_GUESS_CAP = 15
# full pairwise response tables are kept only up to this many codes
TABLE_LIMIT = 4096

_FEEDBACK_RE = re.compile(r"^\s*(\d+)\s*b\s*(\d+)\s*w\s*$", re.IGNORECASE)


class InvalidInputError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    pass


class ContradictionError(RuntimeError):
    """No code is consistent with the recorded responses."""


class Feedback(NamedTuple):
    black: int
    white: int

    def __str__(self) -> str:
        return f"{self.black}b{self.white}w"

    @classmethod
    def parse(cls, text: str) -> "Feedback":
        m = _FEEDBACK_RE.match(text)
        if m is None:
            raise InvalidInputError(f"malformed feedback {text!r}, expected e.g. '2b1w'")
        return cls(int(m.group(1)), int(m.group(2)))


@dataclass(frozen=True)
class Alphabet:
    kappa: int = 6
    ell: int = 4

    def __post_init__(self):
        if self.kappa < 1 or self.ell < 1:
            raise InvalidInputError(f"kappa and ell must be >= 1, got {self.kappa}, {self.ell}")
        if self.kappa > len(string.ascii_uppercase):
            raise InvalidInputError("at most 26 symbols have a letter rendering")

    @property
    def size(self) -> int:
        return self.kappa**self.ell

    @property
    def win(self) -> Feedback:
        return Feedback(self.ell, 0)

    def validate(self, code: Sequence[int]) -> Code:
        code = tuple(int(s) for s in code)
        if len(code) != self.ell:
            raise InvalidInputError(f"code {code} has length {len(code)}, expected {self.ell}")
        if any(s < 0 or s >= self.kappa for s in code):
            raise InvalidInputError(f"code {code} has a symbol outside [0, {self.kappa})")
        return code

    def parse(self, text: str) -> Code:
        text = text.strip().upper()
        if not text.isalpha():
            raise InvalidInputError(f"cannot parse code {text!r}")
        return self.validate(ord(ch) - ord("A") for ch in text)

    def render(self, code: Sequence[int]) -> str:
        return "".join(chr(ord("A") + s) for s in code)

    def index(self, code: Sequence[int]) -> int:
        idx = 0
        for s in self.validate(code):
            idx = idx * self.kappa + s
        return idx

    def code(self, index: int) -> Code:
        if not 0 <= index < self.size:
            raise InvalidInputError(f"index {index} outside the code space")
        out = []
        for _ in range(self.ell):
            index, s = divmod(index, self.kappa)
            out.append(s)
        return tuple(reversed(out))

    def encode(self, fb: Feedback) -> int:
        black, white = fb
        return black * (self.ell + 1) + white

    def decode(self, value: int) -> Feedback:
        return Feedback(*divmod(int(value), self.ell + 1))


def feedback(guess: Sequence[int], secret: Sequence[int]) -> Feedback:
    """Black and white peg counts for ``guess`` scored against ``secret``."""
    if len(guess) != len(secret):
        raise InvalidInputError(f"length mismatch: {len(guess)} vs {len(secret)}")
    black = sum(g == s for g, s in zip(guess, secret))
    common = sum((Counter(guess) & Counter(secret)).values())
    return Feedback(black, common - black)


@dataclass(frozen=True)
class GameHistory:
    turns: tuple[tuple[Code, Feedback], ...] = ()
    cap: int = DEFAULT_GUESS_CAP

    def __post_init__(self):
        object.__setattr__(
            self, "turns", tuple((tuple(g), Feedback(*f)) for g, f in self.turns)
        )
        guesses = [g for g, _ in self.turns]
        if len(set(guesses)) != len(guesses):
            raise InvalidInputError("a guess appears twice in the history")
        if len(self.turns) > self.cap:
            raise InvalidInputError(f"history longer than the guess cap {self.cap}")

    def __len__(self) -> int:
        return len(self.turns)

    def __iter__(self):
        return iter(self.turns)

    @property
    def guesses(self) -> list[Code]:
        return [g for g, _ in self.turns]

    def append(self, guess: Sequence[int], fb: Feedback) -> "GameHistory":
        return GameHistory(self.turns + ((tuple(guess), Feedback(*fb)),), self.cap)


def is_consistent(candidate: Sequence[int], history: GameHistory | Iterable) -> bool:
    candidate = tuple(candidate)
    for guess, fb in history:
        if len(guess) != len(candidate):
            raise InvalidInputError("candidate length differs from the history guesses")
        if feedback(guess, candidate) != tuple(fb):
            return False
    return True


def enumerate_space(alphabet: Alphabet, limit: int = DEFAULT_SPACE_LIMIT) -> list[Code]:
    """All ``kappa**ell`` codes in lexicographic order."""
    if alphabet.size > limit:
        raise ResourceLimitError(f"code space of {alphabet.size} codes exceeds limit {limit}")
    return [tuple(int(s) for s in row) for row in code_space(alphabet, limit).symbols]


def filter_consistent(pool: Iterable[Sequence[int]], history: GameHistory | Iterable) -> list[Code]:
    turns = list(history)
    return [tuple(c) for c in pool if is_consistent(c, turns)]


@dataclass(eq=False)
class CodeSpace:
    """Index-addressed view of the code space with vectorized responses.

    For spaces of at most ``TABLE_LIMIT`` codes the full response table is
    precomputed; larger spaces compute response rows on demand.
    """

    alphabet: Alphabet
    symbols: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    table: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def build(cls, alphabet: Alphabet, limit: int = DEFAULT_SPACE_LIMIT) -> "CodeSpace":
        if alphabet.size > limit:
            raise ResourceLimitError(
                f"code space of {alphabet.size} codes exceeds limit {limit}"
            )
        k, ell = alphabet.kappa, alphabet.ell
        idx = np.arange(alphabet.size)
        powers = k ** np.arange(ell - 1, -1, -1)
        symbols = ((idx[:, None] // powers[None, :]) % k).astype(np.uint8)
        counts = np.zeros((alphabet.size, k), dtype=np.uint8)
        for pos in range(ell):
            np.add.at(counts, (idx, symbols[:, pos]), 1)
        space = cls(alphabet, symbols, counts)
        if alphabet.size <= TABLE_LIMIT:
            space.table = space._compute(idx, idx)
        return space

    @property
    def size(self) -> int:
        return self.alphabet.size

    @property
    def n_responses(self) -> int:
        return (self.alphabet.ell + 1) ** 2

    @property
    def win_code(self) -> int:
        return self.alphabet.ell * (self.alphabet.ell + 1)

    def _compute(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        black = (self.symbols[rows][:, None, :] == self.symbols[cols][None, :, :]).sum(-1)
        common = np.minimum(self.counts[rows][:, None, :], self.counts[cols][None, :, :]).sum(-1)
        return (black * (self.alphabet.ell + 1) + common - black).astype(np.uint8)

    def responses(self, guess: int, cols: np.ndarray) -> np.ndarray:
        """Encoded responses of every code in ``cols`` to the single ``guess``."""
        if self.table is not None:
            return self.table[guess, cols]
        return self._compute(np.array([guess]), np.asarray(cols))[0]

    def matrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[np.ix_(rows, cols)]
        return self._compute(np.asarray(rows), np.asarray(cols))

    def narrow(self, consistent: np.ndarray, guess: int, response: int) -> np.ndarray:
        return consistent[self.responses(guess, consistent) == response]

    def all_indices(self) -> np.ndarray:
        return np.arange(self.size)


@lru_cache(maxsize=8)
def code_space(alphabet: Alphabet, limit: int = DEFAULT_SPACE_LIMIT) -> CodeSpace:
    return CodeSpace.build(alphabet, limit)
