"""CSV records, JSON summaries and plain-text result tables."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from pathlib import Path
from typing import Mapping, Sequence

from mmlab.bench import OPTIMAL_MEAN_6_4, RepRecord, RunStats
from mmlab.stats import SignificanceGroup

COLUMNS = ["strategy", "mu", "repetition", "mean_guesses", "max_guesses"]


def records_to_csv(records: Sequence[RepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow([r.strategy, r.mu, r.repetition, repr(r.mean_guesses), r.max_guesses])
    return buf.getvalue()


def csv_to_records(text: str) -> list[RepRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    return [
        RepRecord(
            strategy=row["strategy"],
            mu=row["mu"],
            repetition=int(row["repetition"]),
            mean_guesses=float(row["mean_guesses"]),
            max_guesses=int(row["max_guesses"]),
        )
        for row in reader
    ]


def stats_by_key(records: Sequence[RepRecord]) -> dict[tuple[str, str], RunStats]:
    grouped: dict[tuple[str, str], list[RepRecord]] = defaultdict(list)
    for r in records:
        grouped[(r.strategy, r.mu)].append(r)
    return {k: RunStats.from_records(v) for k, v in grouped.items()}


def summary_json(
    stats: Mapping[str, RunStats],
    groups: SignificanceGroup | None = None,
    **extra,
) -> str:
    doc = {
        "stats": {k: v.to_dict() for k, v in stats.items()},
        "reference_optimal_mean_6_4": OPTIMAL_MEAN_6_4,
        **extra,
    }
    if groups is not None:
        doc["significance"] = groups.to_dict()
    return json.dumps(doc, indent=2)


def write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


_HEADER = f"{'Strategy':<16}{'min':>8}{'mean':>8}{'median':>8}{'max':>8}{'st.dev.':>9}{'max guesses':>13}"


def _row(name: str, s: RunStats) -> str:
    return (
        f"{name:<16}{s.min:>8.3f}{s.mean:>8.3f}{s.median:>8.3f}{s.max:>8.3f}"
        f"{s.stdev:>9.3f}{s.global_max_guesses:>13d}"
    )


def format_table(stats: Mapping[str, RunStats], groups: SignificanceGroup | None = None, title: str = "") -> str:
    """Rows ordered by mean; a rule separates significance groups."""
    rule = "-" * len(_HEADER)
    lines = [title] if title else []
    lines += [_HEADER, "=" * len(_HEADER)]
    if groups is None:
        blocks = [sorted(stats, key=lambda k: stats[k].mean)]
    else:
        blocks = groups.groups
    for i, block in enumerate(blocks):
        if i:
            lines.append(rule)
        lines += [_row(name, stats[name]) for name in block]
    lines.append(rule)
    return "\n".join(lines)


def format_mu_table(stats: Mapping[str, RunStats], p_vs_full: Mapping[str, float], title: str = "") -> str:
    """One strategy across subset caps, with the p-value against the uncapped run."""
    lines = [title] if title else []
    header = f"{'mu':<8}{'min':>8}{'mean':>8}{'median':>8}{'max':>8}{'st.dev.':>9}{'p vs inf':>10}"
    lines += [header, "=" * len(header)]
    for mu, s in sorted(stats.items(), key=lambda kv: float(kv[0])):
        lines.append(
            f"{mu:<8}{s.min:>8.3f}{s.mean:>8.3f}{s.median:>8.3f}{s.max:>8.3f}{s.stdev:>9.3f}"
            f"{p_vs_full[mu]:>10.4f}"
        )
    return "\n".join(lines)
