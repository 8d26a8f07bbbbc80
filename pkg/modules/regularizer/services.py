# modules/regularizer/services.py
# -*- coding: utf-8 -*-
"""
Втрата L0 = Tr(Xᵀ(L_G + D)X) та її складові: гладкість L1 = Tr(XᵀL_G X)
і неоднорідність L2 = Tr(XᵀDX). Аналітичні градієнти, перевірка
нерівності для L2 і підрахунок «майже рівномірних» та «майже певних» ваг.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from config import Config
from errors import DimensionMismatchError
from modules.graph_core.models import Graph
from .models import Lemma2Report, ProbMatrix, WeightDiag

logger = logging.getLogger(__name__)

NONUNIFORMITY_CSV_HEADER = ("epsilon", "kind", "count", "model_tag")
NEAR_UNIFORM = "near_uniform"
NEAR_ONE = "near_one"


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, ProbMatrix) else np.asarray(x, dtype=float)


def _check_dims(x: np.ndarray, g: Graph | None, d: WeightDiag | None) -> None:
    if g is not None and x.shape[0] != g.n:
        raise DimensionMismatchError(f"matrix has {x.shape[0]} rows, graph has {g.n} nodes")
    if d is not None and x.shape[0] != d.n:
        raise DimensionMismatchError(f"matrix has {x.shape[0]} rows, weight diagonal has {d.n} entries")


# ----------------------------- D за замовчуванням -----------------------------

def default_weight_diag(g: Graph) -> WeightDiag:
    """a_i = 1 − deg(i); для ізольованих вузлів a_i = 0."""
    a = 1.0 - g.degrees.astype(float)
    isolated = np.flatnonzero(g.degrees == 0)
    if isolated.size:
        logger.warning("default weight diagonal: %s isolated nodes clamped to 0", isolated.size)
        a[isolated] = 0.0
    return WeightDiag(a)


# ----------------------------- softmax -----------------------------

def softmax_rows(o) -> ProbMatrix:
    o = np.asarray(o, dtype=float)
    if o.ndim != 2:
        raise DimensionMismatchError(f"logits must be 2-D, got shape {o.shape}")
    if np.isnan(o).any():
        raise ValueError("NaN in logits")
    if not np.all(np.isfinite(o)):
        raise ValueError("non-finite logits")
    z = np.exp(o - o.max(axis=1, keepdims=True))
    return ProbMatrix(z / z.sum(axis=1, keepdims=True))


def softmax_backward(x, dx: np.ndarray) -> np.ndarray:
    """Якобіан softmax по рядках: ∂/∂O = X ⊙ (dX − Σ_j dX·X)."""
    x = _values(x)
    dx = np.asarray(dx, dtype=float)
    return x * (dx - (dx * x).sum(axis=1, keepdims=True))


# ----------------------------- втрати -----------------------------

def smoothness_trace(g: Graph, values) -> float:
    """Tr(VᵀL_G V) = Σ_{(i,j)∈E} ‖v_i − v_j‖² для довільної n×k матриці."""
    v = _values(values)
    _check_dims(v, g, None)
    if not g.edges:
        return 0.0
    diff = v[g.edge_array[:, 0]] - v[g.edge_array[:, 1]]
    return float((diff * diff).sum())


def smoothness_grad(g: Graph, values) -> np.ndarray:
    """∇ Tr(VᵀLV) = 2LV."""
    v = _values(values)
    _check_dims(v, g, None)
    return 2.0 * (g.degrees[:, None] * v - g.adjacency @ v)


def loss_components(x, g: Graph, d: WeightDiag) -> Tuple[float, float, float]:
    xv = _values(x)
    _check_dims(xv, g, d)
    l1 = smoothness_trace(g, xv)
    l2 = float(np.dot(d.a, (xv * xv).sum(axis=1)))
    return l1, l2, l1 + l2


def grad_loss0(x, g: Graph, d: WeightDiag) -> np.ndarray:
    """M = L_G + D симетрична, тому ∇L0 = 2MX."""
    xv = _values(x)
    _check_dims(xv, g, d)
    return smoothness_grad(g, xv) + 2.0 * d.a[:, None] * xv


def grad_loss0_logits(o, g: Graph, d: WeightDiag) -> np.ndarray:
    x = softmax_rows(o)
    return softmax_backward(x, grad_loss0(x, g, d))


# ----------------------------- нерівність для L2 -----------------------------

def lemma2_check(x, d: WeightDiag, tol: float = Config.BOUND_TOL) -> Lemma2Report:
    """
    Tr(XᵀDX) + C ≥ 2 Σ a_i W(μ_i, U(S))², де C = −Tr(D)/m, а також
    Tr(X_oᵀDX_o) ≤ Tr(XᵀDX) ≤ Tr(X_uᵀDX_u) для one-hot X_o та рівномірної X_u.
    """
    xv = _values(x)
    _check_dims(xv, None, d)
    m = xv.shape[1]
    trace = float(np.dot(d.a, (xv * xv).sum(axis=1)))
    constant = -float(d.a.sum()) / m
    # W(μ, U)² = ½ Σ_j |μ_j − 1/m|
    w_sq = 0.5 * np.abs(xv - 1.0 / m).sum(axis=1)
    rhs = 2.0 * float(np.dot(d.a, w_sq))
    lhs = trace + constant
    one_hot = float(d.a.sum())
    uniform = float(d.a.sum()) / m
    holds = lhs - rhs >= -tol and one_hot - trace <= tol and trace - uniform <= tol
    if not holds:
        logger.warning("lemma2 check failed: lhs=%.12g rhs=%.12g trace=%.12g", lhs, rhs, trace)
    return Lemma2Report(
        lhs=lhs,
        rhs=rhs,
        constant=constant,
        trace=trace,
        one_hot_trace=one_hot,
        uniform_trace=uniform,
        holds=bool(holds),
    )


# ----------------------------- неоднорідність -----------------------------

def nonuniformity_counts(x, eps1: float, eps2: float) -> Tuple[int, int]:
    if not (0.0 < eps1 < 1.0 and 0.0 < eps2 < 1.0):
        raise ValueError(f"thresholds must lie in (0, 1), got {eps1}, {eps2}")
    xv = _values(x)
    centre = 1.0 / xv.shape[1]
    near_uniform = int(np.count_nonzero((xv >= centre - eps1) & (xv <= centre + eps1)))
    near_one = int(np.count_nonzero(xv >= 1.0 - eps2))
    return near_uniform, near_one


def nonuniformity_sweep(
    x,
    eps_grid: Sequence[float] = Config.NONUNIFORMITY_EPS,
    model_tag: str = "",
) -> List[tuple]:
    """Рядки (epsilon, kind, count, model_tag) для кожного ε з сітки."""
    rows = []
    for eps in eps_grid:
        near_uniform, near_one = nonuniformity_counts(x, eps, eps)
        rows.append((float(eps), NEAR_UNIFORM, near_uniform, model_tag))
        rows.append((float(eps), NEAR_ONE, near_one, model_tag))
    return rows


def write_nonuniformity_csv(path: str | Path, rows: Iterable[tuple]) -> None:
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(NONUNIFORMITY_CSV_HEADER)
        for row in rows:
            writer.writerow(row)
