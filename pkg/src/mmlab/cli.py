"""Command line: ``mmlab {bench,sweep,table,play,interactive}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO


from mmlab import presets
from mmlab.bench import (
    ExperimentSpec,
    Player,
    chooser_for,
    player_key,
    run_experiment,
    significance_groups,
    subset_sweep,
)
from mmlab.codes import Alphabet, ContradictionError, Feedback, InvalidInputError, code_space
from mmlab.eda import EdaConfig, FitnessKind
from mmlab.report import (
    csv_to_records,
    format_mu_table,
    format_table,
    records_to_csv,
    stats_by_key,
    summary_json,
    write_text,
)
from mmlab.stats import wilcoxon_rank_sum
from mmlab.strategies import StrategyConfig, game_rng, parse_mu, parse_strategy, run_game

log = logging.getLogger("mmlab")

EDA_NAMES = {"eda-f": FitnessKind.CONSISTENCY_ONLY, "eda-fl": FitnessKind.LOCAL_ENTROPY_BIASED}
DEFAULT_STRATEGIES = "entropy,most-parts,expected-size,worst-case,random"


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def read_config(path: str | Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag spelling."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file mirroring these flags")
    p.add_argument("--kappa", type=int, default=6, help="number of symbols")
    p.add_argument("--ell", type=int, default=4, help="code length")
    p.add_argument("--seed", type=int, default=None, help="master seed (else $MMLAB_SEED, else 0)")
    p.add_argument("--cap", type=int, default=15, help="guess cap per game")
    p.add_argument("--first-guess", default=None, help="opening for heuristics (default AABC)")
    p.add_argument("--population", type=int, default=200)
    p.add_argument("--replacement", type=float, default=0.5)
    p.add_argument("--max-generations", type=int, default=500)
    p.add_argument("--eda-first-guess", default=None, help="EDA opening (default AABB)")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_run_outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--secrets", default=None, help="comma-separated codes (default: whole space)")
    p.add_argument("--csv", default=None, help="per-repetition CSV output")
    p.add_argument("--json", default=None, help="JSON summary output")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run strategies over every secret")
    _add_common(bench)
    _add_run_outputs(bench)
    bench.add_argument("--strategies", default=DEFAULT_STRATEGIES)
    bench.add_argument("--mu", default="inf", help="subset cap for heuristic strategies")

    sweep = sub.add_parser("sweep", help="heuristics under several subset caps")
    _add_common(sweep)
    _add_run_outputs(sweep)
    sweep.add_argument("--strategies", default="entropy,most-parts,expected-size,worst-case")
    sweep.add_argument("--mu", default="10,20,30,40,50,inf")

    table = sub.add_parser("table", help="reproduce one of the standard comparison tables")
    _add_common(table)
    _add_run_outputs(table)
    table.add_argument("number", type=int, choices=[2, 3, 4, 5, 6])

    play = sub.add_parser("play", help="play one game against a known secret")
    _add_common(play)
    play.add_argument("--strategy", default="entropy")
    play.add_argument("--mu", default="inf")
    play.add_argument("--secret", required=True)

    inter = sub.add_parser("interactive", help="solver guesses, you answer e.g. 2b1w")
    _add_common(inter)
    inter.add_argument("--strategy", default="entropy")
    inter.add_argument("--mu", default="inf")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            values = read_config(args.config)
        except (OSError, InvalidInputError) as exc:
            parser.error(str(exc))
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        subparser.set_defaults(**values)
        args = parser.parse_args(argv)
    if args.seed is None:
        env = os.environ.get("MMLAB_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"MMLAB_SEED must be an integer, got {env!r}")
    return args


def make_player(name: str, mu: int | None, args: argparse.Namespace, alphabet: Alphabet) -> Player:
    name = name.strip().lower()
    if name in EDA_NAMES:
        return EdaConfig(
            population_size=args.population,
            replacement_rate=args.replacement,
            fitness_kind=EDA_NAMES[name],
            max_generations_per_turn=args.max_generations,
            rng_seed=args.seed,
            first_guess=alphabet.parse(args.eda_first_guess) if args.eda_first_guess else None,
        )
    return StrategyConfig(
        parse_strategy(name),
        subset_cap=mu,
        first_guess=alphabet.parse(args.first_guess) if args.first_guess else None,
        rng_seed=args.seed,
    )


def _spec(args, alphabet: Alphabet, players: list) -> ExperimentSpec:
    secrets = None
    if args.secrets:
        secrets = tuple(alphabet.parse(s) for s in _csv_list(args.secrets))
    return ExperimentSpec(alphabet, tuple(players), args.reps, args.seed, secrets, args.cap)


def _emit_csv(args, records) -> list:
    """Write the CSV and return the records parsed back from it, so printed
    tables come from exactly what was written."""
    text = records_to_csv(records)
    if args.csv:
        write_text(args.csv, text)
    return csv_to_records(text)


def _print_bench(args, records, out: TextIO, title: str) -> None:
    stats = {k[0] if k[1] == "inf" else f"{k[0]}@mu={k[1]}": v for k, v in stats_by_key(records).items()}
    groups = significance_groups(stats, args.alpha) if len(stats) > 1 else None
    print(format_table(stats, groups, title), file=out)
    if args.json:
        write_text(args.json, summary_json(stats, groups, seed=args.seed, reps=args.reps))


def _print_sweep(args, records, out: TextIO, strategies: list[str], title: str) -> None:
    by_key = stats_by_key(records)
    mus = sorted({m for _, m in by_key}, key=lambda m: float(m))
    per_mu = {}
    for mu in mus:
        stats = {s: v for (s, m), v in by_key.items() if m == mu}
        groups = significance_groups(stats, args.alpha) if len(stats) > 1 else None
        per_mu[mu] = (stats, groups)
        print(format_table(stats, groups, f"{title} mu={mu}"), file=out)
        print(file=out)
    vs_full = {}
    for s in strategies:
        stats = {m: v for (name, m), v in by_key.items() if name == s}
        if "inf" not in stats:
            continue
        p = {m: wilcoxon_rank_sum(v.per_rep_means, stats["inf"].per_rep_means) for m, v in stats.items()}
        vs_full[s] = p
        print(format_mu_table(stats, p, f"{s} by subset cap"), file=out)
        print(file=out)
    if args.json:
        extra = {
            "seed": args.seed,
            "reps": args.reps,
            "per_mu_significance": {m: g.to_dict() for m, (_, g) in per_mu.items() if g},
            "p_vs_full": vs_full,
        }
        flat = {f"{s}@mu={m}": v for (s, m), v in by_key.items()}
        write_text(args.json, summary_json(flat, None, **extra))


def cmd_bench(args, out: TextIO = sys.stdout) -> int:
    alphabet = Alphabet(args.kappa, args.ell)
    mu = parse_mu(args.mu)
    players = [make_player(n, mu, args, alphabet) for n in _csv_list(args.strategies)]
    result = run_experiment(_spec(args, alphabet, players), args.workers)
    _print_bench(args, _emit_csv(args, result.records), out, "")
    return 0


def cmd_sweep(args, out: TextIO = sys.stdout) -> int:
    alphabet = Alphabet(args.kappa, args.ell)
    mus = [parse_mu(m) for m in _csv_list(args.mu)]
    names = _csv_list(args.strategies)
    players = [make_player(n, None, args, alphabet) for n in names]
    if any(isinstance(p, EdaConfig) for p in players):
        raise InvalidInputError("subset caps apply to heuristic strategies only")
    result = subset_sweep(_spec(args, alphabet, players), mus, args.workers)
    records = [r for r in result.records if r.mu in {"inf" if m is None else str(m) for m in mus}]
    _print_sweep(args, _emit_csv(args, records), out, [p.label for p in players], "")
    return 0


def cmd_table(args, out: TextIO = sys.stdout) -> int:
    alphabet = Alphabet(args.kappa, args.ell)
    n = args.number
    if n in (2, 3):
        players = presets.table2(alphabet) if n == 2 else presets.table3(alphabet)
        result = run_experiment(_spec(args, alphabet, players), args.workers)
        _print_bench(args, _emit_csv(args, result.records), out, f"Table {n}")
        return 0
    players = presets.table4(alphabet)
    if n == 5:
        players = players[:1]
    elif n == 6:
        players = players[1:2]
    result = subset_sweep(_spec(args, alphabet, players), presets.SUBSET_CAPS, args.workers)
    _print_sweep(args, _emit_csv(args, result.records), out, [p.label for p in players], f"Table {n}")
    return 0


def _render_turn(alphabet: Alphabet, i: int, guess: int, fb: Feedback) -> str:
    return f"{i:>2}  {alphabet.render(alphabet.code(guess))}  {fb}"


def cmd_play(args, out: TextIO = sys.stdout) -> int:
    alphabet = Alphabet(args.kappa, args.ell)
    secret = alphabet.index(alphabet.parse(args.secret))
    player = make_player(args.strategy, parse_mu(args.mu), args, alphabet)
    space = code_space(alphabet)
    rng = game_rng(args.seed, player.stream_id, secret, 0)
    result = run_game(space, secret, chooser_for(player, space, rng), args.cap)
    for i, (guess, (_, fb)) in enumerate(zip(result.guesses, result.history), 1):
        print(_render_turn(alphabet, i, guess, fb), file=out)
    if result.solved:
        print(f"solved in {result.guess_count} guesses by {player_key(player)}", file=out)
        return 0
    print(f"not solved within {args.cap} guesses", file=out)
    return 1


def conflicting_turns(alphabet: Alphabet, played: list[int], responses: list[int]) -> list[int]:
    """A minimal set of turn numbers (1-based) that no code satisfies together."""
    space = code_space(alphabet)

    def empty(turns):
        consistent = space.all_indices()
        for t in turns:
            consistent = space.narrow(consistent, played[t], responses[t])
        return len(consistent) == 0

    keep = list(range(len(played)))
    for t in list(keep):
        trial = [k for k in keep if k != t]
        if empty(trial):
            keep = trial
    return [k + 1 for k in keep]


def cmd_interactive(args, inp: TextIO = sys.stdin, out: TextIO = sys.stdout) -> int:
    alphabet = Alphabet(args.kappa, args.ell)
    player = make_player(args.strategy, parse_mu(args.mu), args, alphabet)
    space = code_space(alphabet)
    chooser = chooser_for(player, space, game_rng(args.seed, player.stream_id, 0, 0))
    consistent = space.all_indices()
    played: list[int] = []
    responses: list[int] = []
    print(f"Think of a {args.ell}-symbol code over A-{chr(64 + args.kappa)}; answer like 2b1w.", file=out)
    while len(played) < args.cap:
        guess = chooser(played, responses, consistent)
        text = alphabet.render(alphabet.code(guess))
        while True:
            print(f"guess {len(played) + 1}: {text}", file=out)
            out.write("feedback> ")
            out.flush()
            line = inp.readline()
            if not line:
                print("\ninput closed", file=out)
                return 1
            try:
                fb = Feedback.parse(line)
                if fb.black + fb.white > args.ell:
                    raise InvalidInputError(f"at most {args.ell} pegs in total")
                break
            except InvalidInputError as exc:
                print(f"{exc}; try again", file=out)
        played.append(guess)
        responses.append(alphabet.encode(fb))
        if fb.black == args.ell:
            print(f"solved in {len(played)} guesses", file=out)
            return 0
        consistent = space.narrow(consistent, guess, alphabet.encode(fb))
        if len(consistent) == 0:
            turns = conflicting_turns(alphabet, played, responses)
            print("contradiction: no code fits all the feedback given.", file=out)
            print(f"turns {', '.join(map(str, turns))} cannot all be true:", file=out)
            for t in turns:
                print(_render_turn(alphabet, t, played[t - 1], alphabet.decode(responses[t - 1])), file=out)
            return 1
    print(f"guess cap of {args.cap} reached", file=out)
    return 1


COMMANDS = {
    "bench": cmd_bench,
    "sweep": cmd_sweep,
    "table": cmd_table,
    "play": cmd_play,
    "interactive": cmd_interactive,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        if args.command == "interactive":
            return cmd_interactive(args, sys.stdin, sys.stdout)
        return COMMANDS[args.command](args, out=sys.stdout)
    except InvalidInputError as exc:
        print(f"mmlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ContradictionError as exc:
        print(f"mmlab {args.command}: experiment aborted: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
