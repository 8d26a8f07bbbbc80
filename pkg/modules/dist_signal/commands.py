# modules/dist_signal/commands.py
from __future__ import annotations

import json
from pathlib import Path

import click

from errors import BoundViolationError
from modules.cli.options import jobs_option, out_option, seed_option
from .bounds import run_bounds_suite


@click.command("bounds")
@click.option("--trials", type=click.IntRange(min=1), default=500, show_default=True)
@click.option("--n", "n", type=click.IntRange(min=2), default=6, show_default=True,
              help="Найбільша кількість вузлів випадкового графа.")
@click.option("--m", "m", type=click.IntRange(min=1), default=3, show_default=True,
              help="Розмір алфавіту міток.")
@seed_option
@jobs_option
@out_option("bounds.json")
def bounds(trials, n, m, seed, jobs, out):
    """Перевірити ланцюги нерівностей на сідованому корпусі випадкових екземплярів."""
    report = run_bounds_suite(trials=trials, n_max=n, m=m, seed=seed, jobs=jobs)
    path = Path(out)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.as_dict(), fh, indent=2)
        fh.write("\n")
    click.echo(
        f"{trials} instances, {report.violation_count} violations, "
        f"c3(nodes) pass rate {report.c3_nodes_pass_rate:.3f} -> {path}"
    )
    if report.violation_count:
        raise BoundViolationError(f"{report.violation_count} inequality violations, see {path}")
