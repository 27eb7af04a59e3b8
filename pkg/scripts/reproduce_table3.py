"""Heuristics, LocalEntropy and both EDA fitness variants (slow: EDA+f_ell takes
several seconds per repetition)."""

from _common import parser, save

from mmlab import presets
from mmlab.bench import ExperimentSpec, run_experiment
from mmlab.report import format_table


def main():
    args = parser(__doc__).parse_args()
    spec = ExperimentSpec(strategies=tuple(presets.table3()), repetitions=args.reps, master_seed=args.seed)
    result = run_experiment(spec, args.workers)
    groups = result.groups()
    print(format_table(result.stats, groups, f"with EDA, seed {args.seed}, {args.reps} reps"))
    save(args.out, "table3", result.records, result.stats, groups, seed=args.seed)


if __name__ == "__main__":
    main()
