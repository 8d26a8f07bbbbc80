# modules/graph_core/commands.py
from __future__ import annotations

from pathlib import Path

import click

from config import Config
from modules.cli.options import out_option, seed_option
from .generators import sbm_generate
from .io import write_graph_file, write_labels_file


@click.command("gen-sbm")
@click.option("--n", "n", type=click.IntRange(min=1), default=Config.SBM_BLOCKS[0], show_default=True,
              help="Вузлів у кожному блоці.")
@click.option("--m", "m", type=click.IntRange(min=1), default=len(Config.SBM_BLOCKS), show_default=True,
              help="Кількість блоків (класів).")
@seed_option
@out_option("sbm")
def gen_sbm(n, m, seed, out):
    """Згенерувати SBM і записати graph.txt та labels.txt у каталог --out."""
    g, labels = sbm_generate([n] * m, Config.SBM_P_IN, Config.SBM_P_OUT, seed)
    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)
    write_graph_file(target / "graph.txt", g)
    write_labels_file(target / "labels.txt", labels)
    click.echo(f"n={g.n} edges={g.num_edges} -> {target}")
