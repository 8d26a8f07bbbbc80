# modules/cli/options.py
"""Спільні прапорці підкоманд."""

from __future__ import annotations

import click

from config import Config
from modules.gnn.models import VARIANTS


def dataset_options(f):
    f = click.option("--labels", "labels", type=click.Path(dir_okay=False), default=None,
                     help="Файл міток для --dataset file.")(f)
    f = click.option("--features", "features", type=click.Path(dir_okay=False), default=None,
                     help="Файл ознак для --dataset file (необов'язковий).")(f)
    f = click.option("--graph", "graph", type=click.Path(dir_okay=False), default=None,
                     help="Файл графа для --dataset file.")(f)
    f = click.option("--dataset", type=click.Choice(["cora", "sbm", "file"]), default="sbm",
                     show_default=True)(f)
    return f


def seed_option(f):
    return click.option("--seed", type=int, default=0, show_default=True)(f)


def jobs_option(f):
    return click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)(f)


def out_option(default: str):
    return click.option("--out", type=click.Path(), default=default, show_default=True)


def model_options(f):
    f = click.option("--epochs", type=click.IntRange(min=0), default=Config.EPOCHS, show_default=True)(f)
    f = click.option("--eta", type=click.FloatRange(min=0.0), default=Config.ETA, show_default=True)(f)
    f = click.option("--variant", type=click.Choice(VARIANTS, case_sensitive=False), default="gcn",
                     show_default=True)(f)
    return f
