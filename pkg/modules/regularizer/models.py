# modules/regularizer/models.py
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from config import Config
from errors import DimensionMismatchError, InvalidDistributionError


@dataclass(frozen=True)
class ProbMatrix:
    """X = φ(O): n×m, кожен рядок: ваги ймовірностей на S."""
    values: np.ndarray

    def __post_init__(self):
        x = np.array(self.values, dtype=float)
        if x.ndim != 2:
            raise DimensionMismatchError(f"probability matrix must be 2-D, got shape {x.shape}")
        tol = Config.PROB_MATRIX_TOL
        if not np.all(np.isfinite(x)):
            raise InvalidDistributionError("probability matrix has non-finite entries")
        if x.size and (x.min() < -tol or x.max() > 1.0 + tol):
            raise InvalidDistributionError("probability matrix entries outside [0, 1]")
        if x.shape[0] and np.max(np.abs(x.sum(axis=1) - 1.0)) > tol:
            raise InvalidDistributionError("probability matrix rows do not sum to 1")
        x.flags.writeable = False
        object.__setattr__(self, "values", x)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def m(self) -> int:
        return int(self.values.shape[1])

    @classmethod
    def uniform(cls, n: int, m: int) -> "ProbMatrix":
        return cls(np.full((n, m), 1.0 / m))

    @classmethod
    def one_hot(cls, labels, m: int) -> "ProbMatrix":
        labels = np.asarray(labels, dtype=np.int64)
        x = np.zeros((labels.size, m))
        x[np.arange(labels.size), labels] = 1.0
        return cls(x)


@dataclass(frozen=True)
class WeightDiag:
    """Діагональ D = diag(a_1, …, a_n), усі a_i ≤ 0."""
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        if np.any(a > 0):
            raise ValueError(f"weight diagonal must be nonpositive, max entry {a.max()!r}")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return int(self.a.size)

    def matrix(self) -> np.ndarray:
        return np.diag(self.a)


@dataclass(frozen=True)
class Lemma2Report:
    lhs: float          # Tr(XᵀDX) + C
    rhs: float          # 2 Σ a_i W(μ_i, U)²
    constant: float     # C = −Tr(D)/m
    trace: float        # Tr(XᵀDX)
    one_hot_trace: float
    uniform_trace: float
    holds: bool

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs
