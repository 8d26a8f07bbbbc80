# modules/dist_signal/simplex.py
"""
Щільний двофазний табличний симплекс для задач
    min cᵀx  за умов  A x = b,  x ≥ 0.
Правило Бленда (найменший індекс при вході й виході) виключає зациклення.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from config import Config
from errors import ConvergenceError, InfeasibleProblemError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    objective: float
    iterations: int


class _Tableau:
    def __init__(self, body: np.ndarray, basis: list, pivot_tol: float):
        self.t = body          # рядки обмежень; останній стовпець: права частина
        self.basis = basis
        self.tol = pivot_tol
        self.iterations = 0

    def pivot(self, row: int, col: int, obj: np.ndarray) -> None:
        t = self.t
        t[row] /= t[row, col]
        for r in range(t.shape[0]):
            if r != row and t[r, col] != 0.0:
                t[r] -= t[r, col] * t[row]
        if obj[col] != 0.0:
            obj -= obj[col] * t[row]
        self.basis[row] = col
        self.iterations += 1

    def run(self, obj: np.ndarray, allowed: int, max_iterations: int) -> None:
        """obj: рядок приведених вартостей (останній елемент: −значення цілі)."""
        while True:
            candidates = np.flatnonzero(obj[:allowed] < -self.tol)
            if candidates.size == 0:
                return
            col = int(candidates[0])
            column = self.t[:, col]
            rows = np.flatnonzero(column > self.tol)
            if rows.size == 0:
                raise InfeasibleProblemError("linear program is unbounded")
            ratios = self.t[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.tol * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: self.basis[r]))
            self.pivot(row, col, obj)
            if self.iterations > max_iterations:
                raise ConvergenceError(f"simplex exceeded {max_iterations} pivots")


def solve_lp(
    c: np.ndarray,
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    pivot_tol: float | None = None,
    max_iterations: int | None = None,
) -> LPResult:
    pivot_tol = Config.LP_PIVOT_TOL if pivot_tol is None else pivot_tol
    max_iterations = Config.LP_MAX_ITERATIONS if max_iterations is None else max_iterations
    c = np.asarray(c, dtype=float)
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    rows, nvars = a.shape

    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    # ── фаза 1: штучні змінні nvars … nvars+rows−1
    body = np.hstack([a, np.eye(rows), b[:, None]])
    tab = _Tableau(body, list(range(nvars, nvars + rows)), pivot_tol)
    obj = np.zeros(nvars + rows + 1)
    obj[nvars:nvars + rows] = 1.0
    for r in range(rows):
        obj -= body[r]
    tab.run(obj, nvars + rows, max_iterations)
    if -obj[-1] > Config.LP_FEASIBILITY_TOL:
        raise InfeasibleProblemError(f"infeasible constraints (phase-1 residual {-obj[-1]:.3e})")

    # ── виводимо штучні змінні з базису, надлишкові рядки відкидаємо
    keep = []
    for r in range(rows):
        if tab.basis[r] < nvars:
            keep.append(r)
            continue
        nonzero = np.flatnonzero(np.abs(tab.t[r, :nvars]) > pivot_tol)
        if nonzero.size:
            tab.pivot(r, int(nonzero[0]), obj)
            keep.append(r)
    if len(keep) < rows:
        logger.debug("simplex: dropped %s redundant constraint rows", rows - len(keep))
    body = np.hstack([tab.t[keep, :nvars], tab.t[keep, -1:]])
    tab2 = _Tableau(body, [tab.basis[r] for r in keep], pivot_tol)
    tab2.iterations = tab.iterations

    # ── фаза 2
    obj = np.append(c, 0.0)
    for r, col in enumerate(tab2.basis):
        if obj[col] != 0.0:
            obj -= obj[col] * tab2.t[r]
    tab2.run(obj, nvars, max_iterations)

    x = np.zeros(nvars)
    for r, col in enumerate(tab2.basis):
        x[col] = max(tab2.t[r, -1], 0.0)
    return LPResult(x=x, objective=float(c @ x), iterations=tab2.iterations)
