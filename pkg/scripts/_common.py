"""Shared argument handling for the reproduction scripts."""

import argparse
import os
from pathlib import Path

from mmlab.report import records_to_csv, summary_json, write_text


def parser(description: str, reps: int = 10) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--seed", type=int, default=int(os.environ.get("MMLAB_SEED", 0)))
    p.add_argument("--reps", type=int, default=reps)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: serial)")
    p.add_argument("--out", type=Path, default=Path("results"), help="directory for CSV/JSON output")
    return p


def save(out: Path, stem: str, records, stats, groups=None, **extra) -> None:
    write_text(out / f"{stem}.csv", records_to_csv(records))
    write_text(out / f"{stem}.json", summary_json(stats, groups, **extra))
