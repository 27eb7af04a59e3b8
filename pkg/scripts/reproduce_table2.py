"""Full-set heuristics and the random baseline over all 1296 secrets."""

from _common import parser, save

from mmlab import presets
from mmlab.bench import ExperimentSpec, run_experiment
from mmlab.report import format_table


def main():
    args = parser(__doc__).parse_args()
    spec = ExperimentSpec(strategies=tuple(presets.table2()), repetitions=args.reps, master_seed=args.seed)
    result = run_experiment(spec, args.workers)
    groups = result.groups()
    print(format_table(result.stats, groups, f"heuristics, seed {args.seed}, {args.reps} reps"))
    save(args.out, "table2", result.records, result.stats, groups, seed=args.seed)


if __name__ == "__main__":
    main()
