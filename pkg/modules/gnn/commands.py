# modules/gnn/commands.py
from __future__ import annotations

import json
import logging
from pathlib import Path

import click

from modules.cli.options import dataset_options, jobs_option, model_options, out_option, seed_option
from modules.regularizer.services import write_nonuniformity_csv
from .datasets import dataset_summary, resolve_dataset
from .models import TrainConfig
from .services import AnalysisContext, default_split, train as train_model, tune_eta

logger = logging.getLogger(__name__)


def _prepare(dataset, graph, features, labels, seed):
    data = resolve_dataset(dataset, graph, labels, features, seed=seed)
    return data, default_split(data, seed)


def _fit(data, split, variant, eta, epochs, seed, tune=False, jobs=1, analysis=None):
    if epochs < 1:
        raise click.UsageError("--epochs must be at least 1")
    cfg = TrainConfig(variant=variant, eta=eta, epochs=epochs, seed=seed)
    if tune and cfg.variant != "gcn":
        best_eta, scores = tune_eta(data.graph, data.features, data.labels, split, cfg, jobs=jobs)
        logger.info("tuned eta for %s: %s (val acc %s)", cfg.variant, best_eta, scores)
        cfg = TrainConfig(variant=variant, eta=best_eta, epochs=epochs, seed=seed)
    return train_model(data.graph, data.features, data.labels, split, cfg,
                       num_classes=data.num_classes, analysis=analysis)


@click.command("train")
@dataset_options
@model_options
@seed_option
@click.option("--tune", is_flag=True, help="Підібрати η за валідаційною точністю.")
@jobs_option
@out_option("metrics.json")
def train(dataset, graph, features, labels, variant, eta, epochs, seed, tune, jobs, out):
    """Навчити GCN або регуляризований варіант і записати Metrics JSON."""
    data, split = _prepare(dataset, graph, features, labels, seed)
    _, metrics = _fit(data, split, variant, eta, epochs, seed, tune=tune, jobs=jobs)
    metrics.dataset = dataset_summary(data.graph, data.features, data.labels)
    path = Path(out)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(metrics.as_dict(), fh, indent=2)
        fh.write("\n")
    click.echo(f"test_acc={metrics.test_acc:.4f} -> {path}")


@click.command("analyze")
@dataset_options
@model_options
@seed_option
@out_option("nonuniformity.csv")
def analyze(dataset, graph, features, labels, variant, eta, epochs, seed, out):
    """Неоднорідність φ(O): GCN проти обраного варіанта, CSV по сітці ε."""
    data, split = _prepare(dataset, graph, features, labels, seed)
    analysis = AnalysisContext(data.graph)
    rows = []
    tags = ["gcn"] if variant.lower() == "gcn" else ["gcn", variant.lower()]
    for tag in tags:
        _, metrics = _fit(data, split, tag, eta, epochs, seed, analysis=analysis)
        rows.extend(metrics.nonuniformity_sweep)
    write_nonuniformity_csv(out, rows)
    click.echo(f"{len(rows)} rows -> {out}")
