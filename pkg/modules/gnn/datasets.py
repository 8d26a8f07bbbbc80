# modules/gnn/datasets.py
# -*- coding: utf-8 -*-
"""
Завантаження датасетів: сирі файли Cora (cora.content / cora.cites),
текстові файли графа/міток/ознак і синтетична SBM.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import DatasetFormatError
from modules.graph_core.generators import sbm_generate
from modules.graph_core.io import content_lines, read_graph_file, read_labels_file
from modules.graph_core.models import Graph
from modules.graph_core.services import build_graph
from .models import Dataset, FeatureMatrix

logger = logging.getLogger(__name__)


# ----------------------------- Cora -----------------------------

def load_cora(
    content_path: str | Path,
    cites_path: str | Path,
    feature_dim: Optional[int] = Config.CORA_FEATURE_DIM,
) -> Tuple[Graph, FeatureMatrix, np.ndarray]:
    g, features, labels, _ = _load_cora(Path(content_path), Path(cites_path), feature_dim)
    return g, features, labels


def _load_cora(content_path: Path, cites_path: Path, feature_dim: Optional[int]):
    ids: Dict[str, int] = {}
    rows: List[np.ndarray] = []
    classes: List[str] = []

    with open(content_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            if len(tokens) < 3:
                raise DatasetFormatError(str(content_path), lineno, "expected '<id> <features…> <class>'")
            paper, feats, label = tokens[0], tokens[1:-1], tokens[-1]
            if feature_dim is None:
                feature_dim = len(feats)
            if len(feats) != feature_dim:
                raise DatasetFormatError(
                    str(content_path), lineno, f"expected {feature_dim} features, found {len(feats)}"
                )
            if paper in ids:
                raise DatasetFormatError(str(content_path), lineno, f"duplicate paper id {paper!r}")
            try:
                row = np.array([float(v) for v in feats])
            except ValueError:
                raise DatasetFormatError(str(content_path), lineno, "non-numeric feature value") from None
            ids[paper] = len(ids)
            rows.append(row)
            classes.append(label)

    if not ids:
        raise DatasetFormatError(str(content_path), None, "no nodes in content file")

    class_names = tuple(sorted(set(classes)))
    index = {name: k for k, name in enumerate(class_names)}
    labels = np.array([index[c] for c in classes], dtype=np.int64)

    edges = set()
    self_loops = 0
    with open(cites_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            if len(tokens) != 2:
                raise DatasetFormatError(str(cites_path), lineno, "expected '<cited> <citing>'")
            for paper in tokens:
                if paper not in ids:
                    raise DatasetFormatError(str(cites_path), lineno, f"dangling citation id {paper!r}")
            u, v = ids[tokens[0]], ids[tokens[1]]
            if u == v:
                self_loops += 1
                continue
            edges.add((min(u, v), max(u, v)))

    if self_loops:
        logger.warning("%s: skipped %s self-citations", cites_path, self_loops)
    if not edges:
        logger.warning("%s: no citations, graph has no edges", cites_path)

    g = build_graph(len(ids), sorted(edges))
    features = FeatureMatrix.normalized(np.vstack(rows))
    logger.info("loaded cora: %s nodes, %s edges, %s classes, %s features",
                g.n, g.num_edges, len(class_names), features.dim)
    return g, features, labels, class_names


def cora_dataset(data_dir: str | Path | None = None) -> Dataset:
    root = Path(data_dir or Config.DATA_DIR)
    for candidate in (root, root / "cora"):
        content = candidate / Config.CORA_CONTENT
        if content.exists():
            break
    else:
        raise FileNotFoundError(f"{Config.CORA_CONTENT} not found under {root}")
    g, features, labels, class_names = _load_cora(
        content, content.with_name(Config.CORA_CITES), Config.CORA_FEATURE_DIM
    )
    return Dataset("cora", g, features, labels, class_names)


# ----------------------------- файлові датасети -----------------------------

def read_features_file(path: str | Path, n: int) -> np.ndarray:
    """Один рядок дійсних чисел на вузол; однакова довжина рядків."""
    path = Path(path)
    rows: List[List[float]] = []
    width = None
    for lineno, line in content_lines(path):
        try:
            row = [float(v) for v in line.split()]
        except ValueError:
            raise DatasetFormatError(str(path), lineno, "non-numeric feature value") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DatasetFormatError(str(path), lineno, f"expected {width} features, found {len(row)}")
        rows.append(row)
    if len(rows) != n:
        raise DatasetFormatError(str(path), None, f"expected {n} feature rows, found {len(rows)}")
    return np.asarray(rows, dtype=float)


def folded_identity_features(n: int, dim: int) -> FeatureMatrix:
    """One-hot номера вузла, згорнутий за модулем dim (для n ≤ dim: доповнена одинична)."""
    f = np.zeros((n, dim))
    f[np.arange(n), np.arange(n) % dim] = 1.0
    return FeatureMatrix(f)


def load_file_dataset(
    graph_path: str | Path,
    labels_path: str | Path,
    features_path: str | Path | None = None,
    feature_dim: int = Config.SBM_FEATURE_DIM,
) -> Dataset:
    g = read_graph_file(graph_path)
    labels = read_labels_file(labels_path, n=g.n)
    if labels.size and labels.min() < 0:
        raise DatasetFormatError(str(labels_path), None, "labels must be nonnegative")
    if features_path is not None:
        features = FeatureMatrix.normalized(read_features_file(features_path, g.n))
    else:
        features = folded_identity_features(g.n, feature_dim)
    return Dataset(Path(graph_path).stem, g, features, labels)


# ----------------------------- SBM -----------------------------

def sbm_dataset(
    block_sizes: Sequence[int] = Config.SBM_BLOCKS,
    p_in: float = Config.SBM_P_IN,
    p_out: float = Config.SBM_P_OUT,
    seed: int = 0,
    feature_dim: int = Config.SBM_FEATURE_DIM,
) -> Dataset:
    g, labels = sbm_generate(block_sizes, p_in, p_out, seed)
    return Dataset("sbm", g, folded_identity_features(g.n, feature_dim), labels)


def dataset_summary(g: Graph, features: FeatureMatrix, labels: np.ndarray) -> dict:
    return {
        "nodes": g.n,
        "edges": g.num_edges,
        "classes": int(np.unique(labels).size),
        "features": features.dim,
    }


def resolve_dataset(
    kind: str,
    graph_path: str | Path | None = None,
    labels_path: str | Path | None = None,
    features_path: str | Path | None = None,
    seed: int = 0,
) -> Dataset:
    """Джерело даних для CLI: cora (DISTSIG_DATA_DIR), sbm (зерно --seed) або file."""
    if kind == "cora":
        return cora_dataset()
    if kind == "sbm":
        return sbm_dataset(seed=seed)
    if kind == "file":
        if graph_path is None or labels_path is None:
            raise ValueError("--dataset file needs --graph and --labels")
        return load_file_dataset(graph_path, labels_path, features_path)
    raise ValueError(f"unknown dataset {kind!r}")
