# modules/spectral/jacobi.py
"""Циклічний метод обертань Якобі для щільних симетричних матриць."""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np

from errors import ConvergenceError

logger = logging.getLogger(__name__)


def _off_norm(a: np.ndarray) -> float:
    # лише позадіагональні елементи
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(matrix: np.ndarray, tol: float, max_sweeps: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Повертає (власні значення, власні вектори-стовпці) без сортування.
    Збіжність: позадіагональна норма ≤ tol·max(1, ‖A‖_F).
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for sweep in range(max_sweeps + 1):
        off = _off_norm(a)
        if off <= threshold:
            logger.debug("Jacobi converged after %s sweeps (off=%.3e)", sweep, off)
            return np.diag(a).copy(), v
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                # обнулений елемент фіксуємо точно
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    raise ConvergenceError(f"no convergence after {max_sweeps} sweeps (off-diagonal norm {off:.3e})")
