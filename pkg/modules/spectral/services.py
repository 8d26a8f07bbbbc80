# modules/spectral/services.py
# -*- coding: utf-8 -*-
"""
Спектральний аналіз сигналів на графі: розклад лапласіана, перетворення
Фур'є на графі, класична повна варіація та частка високих частот.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np

from config import Config
from errors import DimensionMismatchError, InvalidMatrixError
from extensions import make_rng
from modules.graph_core.models import Graph
from modules.graph_core.services import laplacian
from .jacobi import jacobi_eigh
from .models import Spectrum, StepSignal

logger = logging.getLogger(__name__)

SPECTRUM_CSV_HEADER = ("index", "eigenvalue", "coefficient")


# ----------------------------- розклад -----------------------------

def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Найбільший за модулем елемент кожного стовпця додатний, при рівності береться перший індекс."""
    out = vectors.copy()
    mags = np.abs(out)
    for k in range(out.shape[1]):
        col = mags[:, k]
        idx = int(np.flatnonzero(col >= col.max() - 1e-12)[0])
        if out[idx, k] < 0:
            out[:, k] = -out[:, k]
    return out


def eig_sym(matrix: np.ndarray, method: str = "auto") -> Spectrum:
    """
    method: "jacobi", "lapack" або "auto" (Якобі до Config.JACOBI_MAX_N включно).
    Власні значення за зростанням, стабільне впорядкування для кратних.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if a.size and float(np.max(np.abs(a - a.T))) > Config.SYMMETRY_TOL:
        raise InvalidMatrixError("not symmetric")

    if method == "auto":
        method = "jacobi" if a.shape[0] <= Config.JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        values, vectors = jacobi_eigh(a, Config.JACOBI_TOL, Config.JACOBI_MAX_SWEEPS)
    elif method == "lapack":
        values, vectors = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")

    order = np.argsort(values, kind="stable")
    return Spectrum(values[order], _fix_signs(vectors[:, order]), method=method)


def laplacian_spectrum(g: Graph, method: str = "auto") -> Spectrum:
    return eig_sym(laplacian(g), method=method).check_psd()


# ----------------------------- перетворення Фур'є -----------------------------

def _values(x) -> np.ndarray:
    return x.values if isinstance(x, StepSignal) else np.asarray(x, dtype=float).reshape(-1)


def gft(s: Spectrum, x) -> np.ndarray:
    vals = _values(x)
    if vals.size != s.n:
        raise DimensionMismatchError(f"signal has length {vals.size}, spectrum has {s.n}")
    return s.eigenvectors.T @ vals


def igft(s: Spectrum, xhat: np.ndarray) -> np.ndarray:
    xhat = np.asarray(xhat, dtype=float).reshape(-1)
    if xhat.size != s.n:
        raise DimensionMismatchError(f"frequency vector has length {xhat.size}, spectrum has {s.n}")
    return s.eigenvectors @ xhat


def total_variation(g: Graph, x) -> float:
    """Σ_{(i,j)∈E} (x_i − x_j)², що дорівнює xᵀLx."""
    vals = _values(x)
    if vals.size != g.n:
        raise DimensionMismatchError(f"signal has length {vals.size}, graph has {g.n} nodes")
    if not g.edges:
        return 0.0
    diff = vals[g.edge_array[:, 0]] - vals[g.edge_array[:, 1]]
    return float(np.dot(diff, diff))


def high_freq_fraction(xhat: np.ndarray, cut: float = Config.HF_CUT) -> float:
    xhat = np.asarray(xhat, dtype=float).reshape(-1)
    if not 0.0 < cut < 1.0:
        raise ValueError(f"cut must lie in (0, 1), got {cut}")
    energy = float(np.dot(xhat, xhat))
    if energy == 0.0:
        raise ValueError("zero vector has no spectral energy")
    # індекси з одиниці: i > cut·n
    positions = np.arange(1, xhat.size + 1)
    high = xhat[positions > cut * xhat.size]
    return float(np.dot(high, high)) / energy


# ----------------------------- сигнали для аналізу -----------------------------

def normalize_signal(x, center: bool = True) -> np.ndarray:
    vals = np.array(_values(x), dtype=float)
    if center:
        vals = vals - vals.mean()
    norm = float(np.linalg.norm(vals))
    if norm == 0.0:
        logger.warning("normalize_signal: zero signal left unscaled")
        return vals
    return vals / norm


def random_comparison_signal(labels: Sequence[int], seed: int) -> np.ndarray:
    """Н.о.р. мітки з емпіричного розподілу міток c."""
    labels = np.asarray(labels, dtype=np.int64)
    classes, counts = np.unique(labels, return_counts=True)
    rng = make_rng(seed)
    return rng.choice(classes, size=labels.size, p=counts / counts.sum())


def signal_spectrum_rows(s: Spectrum, x) -> List[tuple]:
    xhat = gft(s, x)
    return [(i + 1, float(s.eigenvalues[i]), float(xhat[i])) for i in range(s.n)]


def write_spectrum_csv(path: str | Path, rows: Iterable[tuple]) -> None:
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SPECTRUM_CSV_HEADER)
        for index, eigenvalue, coefficient in rows:
            writer.writerow((index, repr(eigenvalue), repr(coefficient)))


def column_hf_fractions(s: Spectrum, columns: np.ndarray, cut: float = Config.HF_CUT,
                        center: bool = True) -> List[float]:
    """Частка високих частот для кожного стовпця (сигнали нормуються перед перетворенням)."""
    out = []
    for k in range(columns.shape[1]):
        x = normalize_signal(columns[:, k], center=center)
        if not np.any(x):
            out.append(0.0)
            continue
        out.append(high_freq_fraction(gft(s, x), cut))
    return out
