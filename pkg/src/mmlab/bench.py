"""Full-space benchmark runs: every strategy against every secret, repeated.

The unit of work is one (strategy, repetition) pair; each game inside it
draws its own random stream from (master seed, strategy, secret, repetition),
so serial and parallel schedules produce identical records.
"""

from __future__ import annotations

import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from mmlab.codes import DEFAULT_GUESS_CAP, Alphabet, Code, ContradictionError, code_space
from mmlab.eda import EdaConfig, eda_choose_index
from mmlab.stats import SignificanceGroup, group_samples, wilcoxon_rank_sum
from mmlab.strategies import StrategyConfig, choose_index, game_rng, run_game

log = logging.getLogger(__name__)

# best achievable mean over all 6^4 secrets, quoted for reference only
OPTIMAL_MEAN_6_4 = 4.340

Player = Union[StrategyConfig, EdaConfig]


@dataclass(frozen=True)
class ExperimentSpec:
    alphabet: Alphabet = field(default_factory=Alphabet)
    strategies: tuple[Player, ...] = ()
    repetitions: int = 10
    master_seed: int = 0
    secrets: tuple[Code, ...] | None = None
    cap: int = DEFAULT_GUESS_CAP

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        if self.secrets is not None:
            object.__setattr__(
                self, "secrets", tuple(self.alphabet.validate(s) for s in self.secrets)
            )

    def secret_indices(self) -> np.ndarray:
        if self.secrets is None:
            return np.arange(self.alphabet.size)
        return np.array([self.alphabet.index(s) for s in self.secrets], dtype=np.int64)


@dataclass(frozen=True)
class RepRecord:
    """One CSV row: a strategy's games over all secrets in one repetition."""

    strategy: str
    mu: str
    repetition: int
    mean_guesses: float
    max_guesses: int
    failures: int = 0


@dataclass
class RunStats:
    per_rep_means: list[float]
    min: float
    mean: float
    median: float
    max: float
    stdev: float
    global_max_guesses: int
    failures: int = 0
    game_counts: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_records(cls, records: Sequence[RepRecord], game_counts=None) -> "RunStats":
        records = sorted(records, key=lambda r: r.repetition)
        means = [r.mean_guesses for r in records]
        return cls(
            per_rep_means=means,
            min=min(means),
            mean=statistics.fmean(means),
            median=statistics.median(means),
            max=max(means),
            stdev=statistics.stdev(means) if len(means) > 1 else 0.0,
            global_max_guesses=max(r.max_guesses for r in records),
            failures=sum(r.failures for r in records),
            game_counts=game_counts,
        )

    def to_dict(self) -> dict:
        return {
            "per_rep_means": self.per_rep_means,
            "min": self.min,
            "mean": self.mean,
            "median": self.median,
            "max": self.max,
            "stdev": self.stdev,
            "global_max_guesses": self.global_max_guesses,
            "failures": self.failures,
        }


def player_key(player: Player) -> str:
    return player.label if player.mu == "inf" else f"{player.label}@mu={player.mu}"


def chooser_for(player: Player, space, rng: np.random.Generator):
    """Bind a strategy or EDA config to one game's random stream."""
    if isinstance(player, EdaConfig):
        def chooser(played, responses, consistent):
            return eda_choose_index(player, space, played, responses, rng, consistent)
    else:
        def chooser(played, responses, consistent):
            return choose_index(player, space, played, consistent, rng)
    return chooser


def play_unit(
    alphabet: Alphabet,
    player: Player,
    secrets: np.ndarray,
    repetition: int,
    master_seed: int,
    cap: int = DEFAULT_GUESS_CAP,
) -> np.ndarray:
    """Guess counts for every secret; unsolved games count as ``cap + 1``."""
    space = code_space(alphabet)
    counts = np.empty(len(secrets), dtype=np.int64)
    for i, secret in enumerate(secrets):
        rng = game_rng(master_seed, player.stream_id, int(secret), repetition)
        chooser = chooser_for(player, space, rng)
        try:
            result = run_game(space, int(secret), chooser, cap)
        except ContradictionError as exc:
            raise ContradictionError(
                f"{player_key(player)} rep {repetition} secret "
                f"{alphabet.render(alphabet.code(int(secret)))}: {exc}"
            ) from exc
        counts[i] = result.guess_count if result.solved else cap + 1
    return counts


def _unit(args):
    return play_unit(*args)


def _run_units(spec: ExperimentSpec, players: Sequence[Player], workers: int | None):
    secrets = spec.secret_indices()
    jobs = [
        (spec.alphabet, p, secrets, rep, spec.master_seed, spec.cap)
        for p in players
        for rep in range(spec.repetitions)
    ]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_unit, jobs, chunksize=1))
    else:
        results = [_unit(job) for job in jobs]
    out: dict[str, tuple[list[RepRecord], list[np.ndarray]]] = {}
    for job, counts in zip(jobs, results):
        player, rep = job[1], job[3]
        recs, games = out.setdefault(player_key(player), ([], []))
        recs.append(
            RepRecord(
                strategy=player.label,
                mu=player.mu,
                repetition=rep,
                mean_guesses=float(counts.mean()),
                max_guesses=int(counts.max()),
                failures=int((counts > spec.cap).sum()),
            )
        )
        games.append(counts)
    return out


@dataclass
class ExperimentResult:
    stats: dict[str, RunStats]
    records: list[RepRecord]

    def __getitem__(self, key: str) -> RunStats:
        return self.stats[key]

    def groups(self, alpha: float = 0.05, unit: str = "rep") -> SignificanceGroup:
        return significance_groups(self.stats, alpha, unit)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> ExperimentResult:
    units = _run_units(spec, spec.strategies, workers)
    stats, records = {}, []
    for key, (recs, games) in units.items():
        stats[key] = RunStats.from_records(recs, np.concatenate(games))
        records.extend(recs)
        log.info("%s: mean %.3f over %d reps", key, stats[key].mean, len(recs))
    return ExperimentResult(stats, records)


def significance_groups(
    stats: Mapping[str, RunStats], alpha: float = 0.05, unit: str = "rep"
) -> SignificanceGroup:
    """Group strategies whose mean-ordered neighbours are not significantly
    different. ``unit="game"`` tests the individual guess counts instead of
    the per-repetition means."""
    if unit == "rep":
        samples = {k: s.per_rep_means for k, s in stats.items()}
    elif unit == "game":
        samples = {k: s.game_counts for k, s in stats.items()}
        if any(v is None for v in samples.values()):
            raise ValueError("per-game counts are not available for these stats")
    else:
        raise ValueError(f"unknown unit {unit!r}")
    return group_samples(samples, alpha)


@dataclass
class SweepResult:
    stats: dict[tuple[str, str], RunStats]
    vs_full: dict[tuple[str, str], float]
    records: list[RepRecord]

    def groups_at(self, mu: str, alpha: float = 0.05) -> SignificanceGroup:
        return significance_groups(
            {s: v for (s, m), v in self.stats.items() if m == mu}, alpha
        )


def subset_sweep(
    spec: ExperimentSpec, mus: Iterable[int | None], workers: int | None = None
) -> SweepResult:
    """Rerun each strategy with each subset cap; ``None`` means uncapped and is
    always included so every cap can be tested against the full set."""
    mus = list(dict.fromkeys(list(mus) + [None]))
    players = [
        replace(p, subset_cap=mu)
        for p in spec.strategies
        if isinstance(p, StrategyConfig)
        for mu in mus
    ]
    units = _run_units(spec, players, workers)
    stats, records = {}, []
    for p in players:
        recs, games = units[player_key(p)]
        stats[(p.label, p.mu)] = RunStats.from_records(recs, np.concatenate(games))
        records.extend(recs)
    vs_full = {
        (label, mu): wilcoxon_rank_sum(s.per_rep_means, stats[(label, "inf")].per_rep_means)
        for (label, mu), s in stats.items()
    }
    return SweepResult(stats, vs_full, records)
