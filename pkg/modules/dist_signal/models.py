# modules/dist_signal/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import Config
from errors import DimensionMismatchError, InvalidDistributionError
from modules.graph_core.models import TreeCover


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DiscreteDistribution:
    """Ваги ймовірностей на скінченній множині міток S = {s_1, …, s_m}."""
    weights: np.ndarray

    def __post_init__(self):
        w = _readonly(self.weights).reshape(-1)
        if w.size == 0:
            raise InvalidDistributionError("distribution over an empty alphabet")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidDistributionError(f"weights must be finite and nonnegative: {w}")
        if abs(float(w.sum()) - 1.0) > Config.DISTRIBUTION_TOL:
            raise InvalidDistributionError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return int(self.weights.size)

    @classmethod
    def delta(cls, s: int, m: int) -> "DiscreteDistribution":
        w = np.zeros(m)
        w[s] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, m: int) -> "DiscreteDistribution":
        return cls(np.full(m, 1.0 / m))


@dataclass(frozen=True)
class Marginals:
    """Сім'я N = {μ_i}; рядок i матриці X_N це μ_i, стовпець s це сигнал 𝛍_s."""
    matrix: np.ndarray

    def __post_init__(self):
        x = _readonly(self.matrix)
        if x.ndim != 2:
            raise DimensionMismatchError(f"marginals matrix must be 2-D, got shape {x.shape}")
        for i in range(x.shape[0]):
            try:
                DiscreteDistribution(x[i])
            except InvalidDistributionError as e:
                raise InvalidDistributionError(f"row {i}: {e}") from e
        object.__setattr__(self, "matrix", x)

    @classmethod
    def from_labels(cls, labels: Sequence[int], m: int) -> "Marginals":
        """Дельта-маргінали ступінчастого сигналу."""
        labels = np.asarray(labels, dtype=np.int64)
        x = np.zeros((labels.size, m))
        x[np.arange(labels.size), labels] = 1.0
        return cls(x)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def m(self) -> int:
        return int(self.matrix.shape[1])

    def __getitem__(self, i: int) -> DiscreteDistribution:
        return DiscreteDistribution(self.matrix[i])

    def column(self, s: int) -> np.ndarray:
        return self.matrix[:, s]


@dataclass(frozen=True)
class Coupling:
    """γ ∈ Γ(μ, ν): невід'ємна m×m матриця з маргіналами μ (рядки) та ν (стовпці)."""
    matrix: np.ndarray
    source: DiscreteDistribution
    target: DiscreteDistribution

    def __post_init__(self):
        g = _readonly(self.matrix)
        tol = Config.DISTRIBUTION_TOL
        if g.shape != (self.source.m, self.target.m):
            raise DimensionMismatchError(f"coupling shape {g.shape} does not match marginals")
        if np.any(g < -tol):
            raise InvalidDistributionError("coupling has negative entries")
        if np.max(np.abs(g.sum(axis=1) - self.source.weights)) > tol:
            raise InvalidDistributionError("coupling row sums differ from source weights")
        if np.max(np.abs(g.sum(axis=0) - self.target.weights)) > tol:
            raise InvalidDistributionError("coupling column sums differ from target weights")
        object.__setattr__(self, "matrix", g)

    @property
    def cost(self) -> float:
        """Σ_{i≠j} γ(s_i, s_j): вартість за дискретної метрики."""
        return float(self.matrix.sum() - np.trace(self.matrix))


@dataclass(frozen=True)
class JointDistribution:
    """Повна таблиця ймовірностей на Sⁿ, форма (m,)*n."""
    table: np.ndarray

    def __post_init__(self):
        t = _readonly(self.table)
        if np.any(t < -Config.DISTRIBUTION_TOL):
            raise InvalidDistributionError("joint table has negative weights")
        if abs(float(t.sum()) - 1.0) > Config.DISTRIBUTION_TOL:
            raise InvalidDistributionError(f"joint weights sum to {t.sum()!r}")
        object.__setattr__(self, "table", t)

    @property
    def n(self) -> int:
        return int(self.table.ndim)

    @property
    def m(self) -> int:
        return int(self.table.shape[0]) if self.table.ndim else 0

    def marginal(self, i: int) -> np.ndarray:
        axes = tuple(k for k in range(self.n) if k != i)
        return self.table.sum(axis=axes)

    def pair_marginal(self, i: int, j: int) -> np.ndarray:
        axes = tuple(k for k in range(self.n) if k not in (i, j))
        pair = self.table.sum(axis=axes)
        return pair if i < j else pair.T

    def marginals(self) -> Marginals:
        return Marginals(np.vstack([np.clip(self.marginal(i), 0.0, None) for i in range(self.n)]))


@dataclass(frozen=True)
class CoverResult:
    value: float
    cover: Optional[TreeCover] = None
    size_cap: int = 0


@dataclass
class BoundReport:
    """Звіт про ланцюги нерівностей для одного екземпляра."""
    graph: Dict
    marginals: List[List[float]]
    tg1: float
    tg2: float
    tg_exact: float
    tcov: float
    tghv_min: float
    tghv_max: float
    c1: int
    c3: float
    c3_nodes: float
    c3_nodes_holds: bool
    margins: Dict[str, float] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "graph": self.graph,
            "marginals": self.marginals,
            "tg1": self.tg1,
            "tg2": self.tg2,
            "tg_exact": self.tg_exact,
            "tcov": self.tcov,
            "tghv_min": self.tghv_min,
            "tghv_max": self.tghv_max,
            "c1": self.c1,
            "c3": self.c3,
            "c3_nodes": self.c3_nodes,
            "c3_nodes_holds": self.c3_nodes_holds,
            "margins": self.margins,
            "violations": list(self.violations),
        }
