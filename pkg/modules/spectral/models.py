# modules/spectral/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from config import Config
from errors import DimensionMismatchError, InvalidMatrixError


@dataclass(frozen=True)
class StepSignal:
    """Дійсний сигнал на вузлах; alphabet: скінченна множина міток, якщо сигнал ступінчастий."""
    values: np.ndarray
    alphabet: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).reshape(-1)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_labels(cls, labels) -> "StepSignal":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(labels.astype(float), alphabet=tuple(int(c) for c in np.unique(labels)))

    def __len__(self) -> int:
        return int(self.values.size)

    def check_size(self, n: int) -> None:
        if self.values.size != n:
            raise DimensionMismatchError(f"signal has length {self.values.size}, graph has {n} nodes")


@dataclass(frozen=True)
class Spectrum:
    """Власні значення за зростанням і ортонормовані власні вектори-стовпці U."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    method: str = field(default="jacobi", compare=False)

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        n = self.eigenvalues.size
        if self.eigenvectors.shape != (n, n):
            raise DimensionMismatchError(
                f"{n} eigenvalues but eigenvector matrix of shape {self.eigenvectors.shape}"
            )
        if np.any(np.diff(self.eigenvalues) < 0):
            raise InvalidMatrixError("eigenvalues are not ascending")
        gram = self.eigenvectors.T @ self.eigenvectors
        if n and float(np.max(np.abs(gram - np.eye(n)))) > Config.ORTHONORMAL_TOL:
            raise InvalidMatrixError("eigenvectors are not orthonormal")

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def eigenvector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]

    def check_psd(self, tol: float = Config.PSD_TOL) -> "Spectrum":
        """Для лапласіанів: λ_1 ≥ −tol."""
        if self.n and self.eigenvalues[0] < -tol:
            raise InvalidMatrixError(f"negative eigenvalue {self.eigenvalues[0]:.3e}")
        return self
