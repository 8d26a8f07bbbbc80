# modules/spectral/commands.py
from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from modules.cli.options import dataset_options, model_options, out_option, seed_option
from modules.gnn.datasets import resolve_dataset
from modules.gnn.models import TrainConfig
from modules.gnn.services import AnalysisContext, default_split, evaluate, train
from .services import (
    gft,
    high_freq_fraction,
    normalize_signal,
    random_comparison_signal,
    signal_spectrum_rows,
    write_spectrum_csv,
)


@click.command("spectrum")
@dataset_options
@model_options
@seed_option
@click.option("--raw", is_flag=True, help="Не центрувати й не нормувати сигнали перед перетворенням.")
@out_option("spectrum")
def spectrum(dataset, graph, features, labels, variant, eta, epochs, seed, raw, out):
    """
    Коефіцієнти GFT на головній компоненті: сигнал міток, випадковий сигнал
    з тим самим розподілом міток і стовпці φ(O) останньої епохи навчання
    (--epochs 0 їх пропускає).
    """
    data = resolve_dataset(dataset, graph, labels, features, seed=seed)
    analysis = AnalysisContext(data.graph)
    sub, nodes = analysis.main
    basis = analysis.spectrum

    signals = {
        "label": data.labels[nodes].astype(float),
        "random": random_comparison_signal(data.labels[nodes], seed).astype(float),
    }
    if epochs > 0:
        split = default_split(data, seed)
        cfg = TrainConfig(variant=variant, eta=eta, epochs=epochs, seed=seed)
        _, metrics = train(data.graph, data.features, data.labels, split, cfg,
                           num_classes=data.num_classes, analysis=analysis)
        final = evaluate(metrics.final_params, data.graph, data.features, data.labels, split.test,
                         model_tag=cfg.variant, analysis=analysis)
        x = final.x.values
        for k in range(x.shape[1]):
            signals[f"{cfg.variant}_class{k}"] = x[nodes, k]

    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)
    summary = {"nodes": int(sub.n), "method": basis.method, "normalized": not raw, "hf_fraction": {}}
    for name, values in signals.items():
        x = np.asarray(values, dtype=float) if raw else normalize_signal(values)
        write_spectrum_csv(target / f"{name}.csv", signal_spectrum_rows(basis, x))
        summary["hf_fraction"][name] = high_freq_fraction(gft(basis, x)) if np.any(x) else 0.0
    with open(target / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    click.echo(f"{len(signals)} spectra -> {target}")
