# modules/graph_core/io.py
"""
Текстові формати: граф: перший рядок "n m", далі m рядків "u v" (з нуля),
рядки з '#': коментарі; мітки: одне ціле на рядок, рівно n рядків.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import numpy as np

from errors import DatasetFormatError, InvalidGraphError
from .models import Graph
from .services import build_graph


def content_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_graph_file(path: str | Path) -> Graph:
    path = Path(path)
    lines = content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise DatasetFormatError(str(path), None, "missing 'n m' header") from None
    parts = header.split()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        raise DatasetFormatError(str(path), lineno, f"expected 'n m', got {header!r}")
    n, m = int(parts[0]), int(parts[1])

    pairs: List[tuple] = []
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise DatasetFormatError(str(path), lineno, f"expected 'u v', got {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    if len(pairs) != m:
        raise DatasetFormatError(str(path), None, f"header announces {m} edges, found {len(pairs)}")
    try:
        return build_graph(n, pairs)
    except InvalidGraphError as e:
        raise DatasetFormatError(str(path), None, str(e)) from e


def write_graph_file(path: str | Path, g: Graph) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_labels_file(path: str | Path, n: int | None = None) -> np.ndarray:
    path = Path(path)
    values = []
    for lineno, line in content_lines(path):
        try:
            values.append(int(line))
        except ValueError:
            raise DatasetFormatError(str(path), lineno, f"expected an integer label, got {line!r}") from None
    if n is not None and len(values) != n:
        raise DatasetFormatError(str(path), None, f"expected {n} labels, found {len(values)}")
    return np.asarray(values, dtype=np.int64)


def write_labels_file(path: str | Path, labels: Sequence[int]) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        for c in labels:
            fh.write(f"{int(c)}\n")
