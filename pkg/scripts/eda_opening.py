"""EDA variants with the AABB and AABC openings side by side."""

from _common import parser, save

from mmlab.bench import ExperimentSpec, run_experiment
from mmlab.codes import Alphabet
from mmlab.eda import EdaConfig, FitnessKind
from mmlab.report import format_table
from mmlab.stats import wilcoxon_rank_sum
from mmlab.strategies import aabb_guess, aabc_guess


def main():
    args = parser(__doc__, reps=4).parse_args()
    alphabet = Alphabet()
    stats, records = {}, []
    for name, opening in (("aabb", aabb_guess(alphabet)), ("aabc", aabc_guess(alphabet))):
        players = tuple(EdaConfig(fitness_kind=k, first_guess=opening) for k in FitnessKind)
        result = run_experiment(ExperimentSpec(alphabet, players, args.reps, args.seed), args.workers)
        stats.update({f"{k}/{name}": v for k, v in result.stats.items()})
        records += result.records
    print(format_table(stats, None, f"EDA openings, seed {args.seed}, {args.reps} reps"))
    for label in ("eda-fl", "eda-f"):
        a, b = stats[f"{label}/aabb"], stats[f"{label}/aabc"]
        print(f"{label}: AABB vs AABC p = {wilcoxon_rank_sum(a.per_rep_means, b.per_rep_means):.4f}")
    save(args.out, "eda_opening", records, stats, seed=args.seed)


if __name__ == "__main__":
    main()
