"""Guess-selection strategies and benchmarks for generalized Mastermind."""

from mmlab.codes import (
    Alphabet,
    ContradictionError,
    Feedback,
    GameHistory,
    InvalidInputError,
    ResourceLimitError,
    enumerate_space,
    feedback,
    filter_consistent,
    is_consistent,
)
from mmlab.partition import GuessScore, PartitionTable, partition, score
from mmlab.strategies import (
    GameResult,
    StrategyConfig,
    StrategyKind,
    play_game,
    sample_subset,
    select_guess,
)
from mmlab.eda import (
    EdaConfig,
    FitnessKind,
    MarginalModel,
    eda_select_guess,
    fitness_f,
    fitness_f_ell,
    local_entropy,
    play_eda_game,
)
from mmlab.bench import (
    ExperimentSpec,
    RunStats,
    SignificanceGroup,
    run_experiment,
    significance_groups,
    subset_sweep,
    wilcoxon_rank_sum,
)

__all__ = [
    "Alphabet",
    "ContradictionError",
    "EdaConfig",
    "ExperimentSpec",
    "Feedback",
    "FitnessKind",
    "GameHistory",
    "GameResult",
    "GuessScore",
    "InvalidInputError",
    "MarginalModel",
    "PartitionTable",
    "ResourceLimitError",
    "RunStats",
    "SignificanceGroup",
    "StrategyConfig",
    "StrategyKind",
    "eda_select_guess",
    "enumerate_space",
    "feedback",
    "filter_consistent",
    "fitness_f",
    "fitness_f_ell",
    "is_consistent",
    "local_entropy",
    "partition",
    "play_eda_game",
    "play_game",
    "run_experiment",
    "sample_subset",
    "score",
    "select_guess",
    "significance_groups",
    "subset_sweep",
    "wilcoxon_rank_sum",
]
