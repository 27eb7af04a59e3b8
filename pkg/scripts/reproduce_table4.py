"""Heuristics restricted to a random subset of mu consistent candidates."""

from _common import parser, save

from mmlab import presets
from mmlab.bench import ExperimentSpec, subset_sweep
from mmlab.report import format_mu_table, format_table


def main():
    p = parser(__doc__)
    p.add_argument("--mu", default=",".join(map(str, presets.SUBSET_CAPS)))
    args = p.parse_args()
    mus = [int(m) for m in args.mu.split(",")]
    spec = ExperimentSpec(strategies=tuple(presets.table4()), repetitions=args.reps, master_seed=args.seed)
    sweep = subset_sweep(spec, mus, args.workers)
    for mu in [str(m) for m in mus] + ["inf"]:
        stats = {s: v for (s, m), v in sweep.stats.items() if m == mu}
        print(format_table(stats, sweep.groups_at(mu), f"mu={mu}"), end="\n\n")
    for kind in presets.HEURISTICS:
        stats = {m: v for (s, m), v in sweep.stats.items() if s == kind.value}
        p_full = {m: sweep.vs_full[(kind.value, m)] for m in stats}
        print(format_mu_table(stats, p_full, kind.value), end="\n\n")
    flat = {f"{s}@mu={m}": v for (s, m), v in sweep.stats.items()}
    p_vs_full = {f"{s}@mu={m}": p for (s, m), p in sweep.vs_full.items()}
    save(args.out, "table4", sweep.records, flat, seed=args.seed, p_vs_full=p_vs_full)


if __name__ == "__main__":
    main()
