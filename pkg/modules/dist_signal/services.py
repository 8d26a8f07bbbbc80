# modules/dist_signal/services.py
# -*- coding: utf-8 -*-
"""
Розподільні сигнали на графі: відстань Вассерштейна за дискретної метрики,
конструктивне оптимальне зчеплення та всі варіанти повної варіації
T_{G,1}, T_{G,2}, T_G (точно, через ЛП), T^c_G і T_{G,H,v0}.
"""

from __future__ import annotations

import itertools
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import (
    DimensionMismatchError,
    EnumerationLimitError,
    InfeasibleProblemError,
    InvalidGraphError,
)
from modules.graph_core.models import Graph, SpanningTree, TreeCover
from modules.graph_core.services import (
    clique_number_complement,
    enumerate_spanning_trees,
    laplacian,
    search_tree_cover,
)
from .models import Coupling, CoverResult, DiscreteDistribution, JointDistribution, Marginals
from .simplex import solve_lp

logger = logging.getLogger(__name__)


def _as_dist(x) -> DiscreteDistribution:
    return x if isinstance(x, DiscreteDistribution) else DiscreteDistribution(np.asarray(x, dtype=float))


def _same_alphabet(mu: DiscreteDistribution, nu: DiscreteDistribution) -> None:
    if mu.m != nu.m:
        raise DimensionMismatchError(f"alphabet mismatch: {mu.m} vs {nu.m}")


def _check_size(g: Graph, marginals: Marginals) -> None:
    if marginals.n != g.n:
        raise DimensionMismatchError(f"{marginals.n} marginals for a graph on {g.n} nodes")


# ----------------------------- Вассерштейн -----------------------------

def wasserstein_sq(mu, nu) -> float:
    """W(μ,ν)² = ½ Σ|μ(s) − ν(s)| за дискретної метрики."""
    mu, nu = _as_dist(mu), _as_dist(nu)
    _same_alphabet(mu, nu)
    return 0.5 * float(np.abs(mu.weights - nu.weights).sum())


def optimal_coupling(mu, nu) -> Coupling:
    """
    Діагональ γ(s,s) = min(μ(s), ν(s)); залишки мають неперетинні носії,
    тому решту маси переносимо правилом північно-західного кута поза діагоналлю.
    """
    mu, nu = _as_dist(mu), _as_dist(nu)
    _same_alphabet(mu, nu)
    x, y = mu.weights, nu.weights
    diag = np.minimum(x, y)
    gamma = np.diag(diag)
    rx = list(x - diag)
    ry = list(y - diag)

    i = j = 0
    m = mu.m
    while i < m and j < m:
        if rx[i] <= 0.0:
            i += 1
            continue
        if ry[j] <= 0.0:
            j += 1
            continue
        amount = min(rx[i], ry[j])
        gamma[i, j] += amount
        rx[i] -= amount
        ry[j] -= amount
        if rx[i] <= ry[j]:
            i += 1
        else:
            j += 1
    return Coupling(gamma, mu, nu)


def coupling_lp_oracle(mu, nu, max_labels: int | None = None) -> float:
    """Мінімум Σ γ(s_i,s_j) d(s_i,s_j)² по транспортному політопу, симплексом."""
    max_labels = Config.ORACLE_MAX_LABELS if max_labels is None else max_labels
    mu, nu = _as_dist(mu), _as_dist(nu)
    _same_alphabet(mu, nu)
    m = mu.m
    if m > max_labels:
        raise EnumerationLimitError(f"alphabet too large for oracle: {m} > {max_labels}")
    cost = (1.0 - np.eye(m)).reshape(-1)
    rows = np.kron(np.eye(m), np.ones((1, m)))   # Σ_j γ(i, j) = μ(i)
    cols = np.kron(np.ones((1, m)), np.eye(m))   # Σ_i γ(i, j) = ν(j)
    result = solve_lp(cost, np.vstack([rows, cols]), np.concatenate([mu.weights, nu.weights]))
    return result.objective


# ----------------------------- T_{G,1}, T_{G,2} -----------------------------

def edge_l1_weights(g: Graph, marginals: Marginals) -> np.ndarray:
    """Для кожного ребра Σ_s |μ_i(s) − μ_j(s)| у порядку g.edges."""
    if not g.edges:
        return np.zeros(0)
    x = marginals.matrix
    return np.abs(x[g.edge_array[:, 0]] - x[g.edge_array[:, 1]]).sum(axis=1)


def tv_l1_l2(g: Graph, marginals: Marginals) -> Tuple[float, float]:
    _check_size(g, marginals)
    if not g.edges:
        return 0.0, 0.0
    x = marginals.matrix
    diff = x[g.edge_array[:, 0]] - x[g.edge_array[:, 1]]
    tg1 = float(np.abs(diff).sum())
    tg2 = float((diff * diff).sum())
    trace_form = float(np.trace(x.T @ laplacian(g) @ x))
    if abs(trace_form - tg2) > Config.BOUND_TOL * max(1.0, tg2):
        logger.warning("T_G2 edge sum %.12g differs from trace form %.12g", tg2, trace_form)
    return tg1, tg2


# ----------------------------- точна T_G -----------------------------

def _state_table(n: int, m: int) -> np.ndarray:
    return np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int64).reshape(-1, n)


def tv_of_joint(g: Graph, joint: JointDistribution) -> float:
    """E_{x∼μ} Σ_{(i,j)∈E} d(x_i, x_j)²."""
    if joint.n != g.n:
        raise DimensionMismatchError(f"joint over {joint.n} coordinates, graph has {g.n} nodes")
    total = 0.0
    for i, j in g.edges:
        pair = joint.pair_marginal(i, j)
        total += float(pair.sum() - np.trace(pair))
    return total


def tv_exact(
    g: Graph,
    marginals: Marginals,
    state_cap: int | None = None,
    return_joint: bool = False,
):
    """
    T_G(N) = inf по Γ(N) від очікуваної варіації. Змінні ЛП: ваги всіх mⁿ
    станів, обмеження: n·m маргінальних рівностей.
    """
    state_cap = Config.JOINT_STATE_CAP if state_cap is None else state_cap
    _check_size(g, marginals)
    n, m = marginals.n, marginals.m
    if m ** n > state_cap:
        raise EnumerationLimitError(f"state space too large: {m}^{n} = {m ** n} > {state_cap}")

    states = _state_table(n, m)
    cost = np.zeros(states.shape[0])
    for i, j in g.edges:
        cost += states[:, i] != states[:, j]
    a_eq = np.vstack([(states[:, i] == s).astype(float) for i in range(n) for s in range(m)])
    b_eq = marginals.matrix.reshape(-1)
    try:
        result = solve_lp(cost, a_eq, b_eq)
    except InfeasibleProblemError as e:
        # для коректних маргіналів Γ(N) містить добуток мір, тож це внутрішня помилка
        raise RuntimeError(f"infeasible marginals: {e}") from e

    value = float(result.objective)
    if not return_joint:
        return value
    table = result.x / result.x.sum()
    return value, JointDistribution(table.reshape((m,) * n))


# ----------------------------- T_{G,H,v0} -----------------------------

def _rho(mu_a: np.ndarray, mu_b: np.ndarray) -> np.ndarray:
    """ρ_{a,b}(s) = μ_b(s)/μ_a(s), якщо μ_b(s) ≤ μ_a(s), інакше 1; 0/0 вважаємо 1."""
    ratio = np.divide(mu_b, mu_a, out=np.ones_like(mu_a), where=mu_a > 0)
    return np.where(mu_b <= mu_a, ratio, 1.0)


def _rho_path(x: np.ndarray, path: Sequence[int]) -> np.ndarray:
    out = np.ones(x.shape[1])
    for a, b in zip(path[:-1], path[1:]):
        out *= _rho(x[a], x[b])
    return out


def tv_tree_rooted(g: Graph, h: SpanningTree, v0: int, marginals: Marginals) -> float:
    _check_size(g, marginals)
    try:
        h.check_host(g)
    except InvalidGraphError as e:
        raise InvalidGraphError(f"tree/graph mismatch: {e}") from e
    tree = h if h.root == v0 and h.parent is not None else h.rooted(v0)
    x = marginals.matrix

    total = 0.0
    for i, j in g.edges:
        k = tree.meet(i, j)
        rho_i = _rho_path(x, tree.path_from_ancestor(k, i))
        rho_j = _rho_path(x, tree.path_from_ancestor(k, j))
        t = x[i] + x[j] - 2.0 * x[k] * rho_i * rho_j
        total += float(t.sum())
    return total


def tree_coupled_joint(g: Graph, h: SpanningTree, v0: int, marginals: Marginals,
                       state_cap: int | None = None) -> JointDistribution:
    """
    Байєсівська мережа на дереві, орієнтованому від v0: кожне ребро дерева
    несе умовний розподіл з оптимального зчеплення. Маргінали відтворюють N.
    """
    state_cap = Config.JOINT_STATE_CAP if state_cap is None else state_cap
    _check_size(g, marginals)
    h.check_host(g)
    n, m = marginals.n, marginals.m
    if m ** n > state_cap:
        raise EnumerationLimitError(f"state space too large: {m}^{n} = {m ** n} > {state_cap}")
    tree = h.rooted(v0)
    x = marginals.matrix

    conditionals = {}
    for child in range(n):
        parent = tree.parent[child]
        if parent < 0:
            continue
        gamma = optimal_coupling(x[parent], x[child]).matrix
        rowsum = gamma.sum(axis=1, keepdims=True)
        # рядок з нульовою масою батька на ймовірність не впливає
        conditionals[child] = np.divide(gamma, rowsum, out=np.tile(x[child], (m, 1)), where=rowsum > 0)

    states = _state_table(n, m)
    weights = x[v0][states[:, v0]].copy()
    for child, cond in conditionals.items():
        weights *= cond[states[:, tree.parent[child]], states[:, child]]
    return JointDistribution(weights.reshape((m,) * n))


# ----------------------------- покриттєва T^c -----------------------------

def tree_tv(tree: SpanningTree, marginals: Marginals) -> float:
    """T_T(N) = ½·T_{T,1}(N), точне значення на дереві."""
    x = marginals.matrix
    if not tree.edges:
        return 0.0
    e = np.asarray(tree.edges)
    return 0.5 * float(np.abs(x[e[:, 0]] - x[e[:, 1]]).sum())


def default_cover_cap(g: Graph) -> int:
    if g.n <= Config.CLIQUE_EXACT_LIMIT:
        _, c1 = clique_number_complement(g)
        return max(c1, 3)
    return 3


def tv_cover(
    g: Graph,
    marginals: Marginals,
    size_cap: Optional[int] = None,
    tree_cap: Optional[int] = None,
) -> CoverResult:
    """
    Мінімум Σ T_{T_i}(N) по покриттях із не більше ніж size_cap дерев.
    Точне лише в межах обмеження на розмір покриття.
    """
    _check_size(g, marginals)
    size_cap = default_cover_cap(g) if size_cap is None else size_cap
    try:
        trees = enumerate_spanning_trees(g, cap=tree_cap)
    except (EnumerationLimitError, InvalidGraphError) as e:
        raise EnumerationLimitError(f"enumeration infeasible: {e}", count=getattr(e, "count", None)) from e
    costs = [tree_tv(t, marginals) for t in trees]
    found = search_tree_cover(g, trees, size_cap, costs=costs)
    if found is None:
        raise EnumerationLimitError(f"no cover within cap {size_cap}")
    value, picked = found
    return CoverResult(value=value, cover=TreeCover(tuple(trees[k] for k in picked)), size_cap=size_cap)
