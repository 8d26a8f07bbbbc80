# modules/graph_core/generators.py
from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from errors import InvalidGraphError
from extensions import make_rng
from .models import Graph


def sbm_generate(
    block_sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: int,
) -> Tuple[Graph, np.ndarray]:
    """
    Стохастична блокова модель. Одне випробування Бернуллі на кожну пару
    i < j у порядку рядків верхнього трикутника, тож граф відтворюється
    побітово для фіксованого зерна.
    """
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise InvalidGraphError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    if any(int(b) < 0 for b in block_sizes):
        raise InvalidGraphError(f"negative block size in {list(block_sizes)}")

    labels = np.repeat(np.arange(len(block_sizes)), [int(b) for b in block_sizes])
    n = int(labels.size)
    iu, ju = np.triu_indices(n, k=1)
    draws = make_rng(seed).random(iu.size)
    prob = np.where(labels[iu] == labels[ju], p_in, p_out)
    hit = draws < prob
    edges = tuple(zip(iu[hit].tolist(), ju[hit].tolist()))
    return Graph(n=n, edges=edges), labels
