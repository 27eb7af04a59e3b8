"""Strategy line-ups for the standard 6-colour, 4-peg comparison runs."""

from __future__ import annotations

from mmlab.codes import Alphabet
from mmlab.eda import EdaConfig, FitnessKind
from mmlab.strategies import StrategyConfig, StrategyKind, aabc_guess

HEURISTICS = (
    StrategyKind.ENTROPY,
    StrategyKind.MOST_PARTS,
    StrategyKind.EXPECTED_SIZE,
    StrategyKind.WORST_CASE,
)
SUBSET_CAPS = (10, 20, 30, 40, 50)


def table2(alphabet: Alphabet = Alphabet()) -> list:
    return [StrategyConfig(k) for k in HEURISTICS + (StrategyKind.RANDOM,)]


def table3(alphabet: Alphabet = Alphabet()) -> list:
    """Heuristics, LocalEntropy and both EDA variants, all opening with AABC."""
    opening = aabc_guess(alphabet)
    return table2(alphabet)[:-1] + [
        StrategyConfig(StrategyKind.LOCAL_ENTROPY),
        EdaConfig(fitness_kind=FitnessKind.LOCAL_ENTROPY_BIASED, first_guess=opening),
        EdaConfig(fitness_kind=FitnessKind.CONSISTENCY_ONLY, first_guess=opening),
        StrategyConfig(StrategyKind.RANDOM),
    ]


def table4(alphabet: Alphabet = Alphabet()) -> list:
    return [StrategyConfig(k) for k in HEURISTICS]
