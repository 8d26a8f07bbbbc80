# modules/graph_core/services.py
# -*- coding: utf-8 -*-
"""
Побудова графа, лапласіан, кістякові дерева, клікове число доповнення
та пошук покриттів кістяковими деревами.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import BoundViolationError, EnumerationLimitError, InvalidGraphError
from .models import Edge, Graph, SpanningTree, TreeCover, _UnionFind, canonical_edges

logger = logging.getLogger(__name__)


# ----------------------------- побудова -----------------------------

def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    if n < 0:
        raise InvalidGraphError(f"node count must be nonnegative, got {n}")
    seen: set = set()
    for raw in edges:
        u, v = int(raw[0]), int(raw[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraphError(f"edge {(u, v)} out of range for {n} nodes")
        if u == v:
            raise InvalidGraphError(f"self-loop at node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidGraphError(f"duplicate edge {key}")
        seen.add(key)
    return Graph(n=n, edges=canonical_edges(seen))


def complement(g: Graph) -> Graph:
    iu, ju = np.triu_indices(g.n, k=1)
    keep = g.adjacency[iu, ju] == 0
    return Graph(n=g.n, edges=tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    index = {int(v): k for k, v in enumerate(nodes)}
    sub = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(n=len(index), edges=canonical_edges(sub))


# ----------------------------- матричні подання -----------------------------

def laplacian(g: Graph) -> np.ndarray:
    """L = D − A."""
    return np.diag(g.degrees.astype(float)) - g.adjacency


def normalized_adjacency(g: Graph) -> np.ndarray:
    """Â = D̃^{-1/2}(A+I)D̃^{-1/2}; кожен D̃_ii ≥ 1 завдяки петлі."""
    a_tilde = g.adjacency + np.eye(g.n)
    d_inv_sqrt = 1.0 / np.sqrt(a_tilde.sum(axis=1))
    return a_tilde * d_inv_sqrt[:, None] * d_inv_sqrt[None, :]


# ----------------------------- компоненти зв'язності -----------------------------

def connected_components(g: Graph) -> List[List[int]]:
    uf = _UnionFind(g.n)
    for u, v in g.edges:
        uf.union(u, v)
    groups: dict = {}
    for v in range(g.n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: (-len(c), c[0]))


def main_component(g: Graph) -> Tuple[Graph, np.ndarray]:
    """Найбільша компонента (при рівності з найменшим вузлом) і її вузли у вихідній нумерації."""
    if g.n == 0:
        return g, np.zeros(0, dtype=np.int64)
    nodes = connected_components(g)[0]
    return induced_subgraph(g, nodes), np.asarray(nodes, dtype=np.int64)


# ----------------------------- кістякові дерева -----------------------------

def kirchhoff_count(g: Graph) -> int:
    """Кількість кістякових дерев за матричною теоремою про дерева."""
    if g.n <= 1:
        return 1
    reduced = laplacian(g)[1:, 1:]
    sign, logdet = np.linalg.slogdet(reduced)
    if sign <= 0:
        return 0
    return int(round(float(np.exp(logdet))))


def _edges_connect(n: int, edges: Iterable[Edge]) -> bool:
    uf = _UnionFind(n)
    return sum(uf.union(u, v) for u, v in edges) == n - 1


def enumerate_spanning_trees(g: Graph, cap: int | None = None) -> List[SpanningTree]:
    """
    Бектрекінг по ребрах у канонічному порядку: спершу беремо ребро, потім
    пропускаємо його, якщо залишок ще може зв'язати граф. Перед перебором
    кількість перевіряється за Кірхгофом.
    """
    cap = Config.SPANNING_TREE_CAP if cap is None else cap
    if not g.is_connected():
        raise InvalidGraphError("graph disconnected")
    count = kirchhoff_count(g)
    if count > cap:
        raise EnumerationLimitError(f"tree count exceeds cap: {count} > {cap}", count=count)

    edges = list(g.edges)
    need = g.n - 1
    found: List[Tuple[Edge, ...]] = []

    def _extend(k: int, comp: List[int], chosen: List[Edge]) -> None:
        if len(chosen) == need:
            found.append(tuple(chosen))
            return
        if len(edges) - k < need - len(chosen):
            return
        u, v = edges[k]
        if comp[u] != comp[v]:
            old, new = comp[v], comp[u]
            merged = [new if c == old else c for c in comp]
            _extend(k + 1, merged, chosen + [(u, v)])
        if _edges_connect(g.n, chosen + edges[k + 1:]):
            _extend(k + 1, comp, chosen)

    _extend(0, list(range(g.n)), [])
    found.sort()
    trees = [SpanningTree(g.n, t) for t in found]
    if len(trees) != count:
        logger.warning("Kirchhoff count %s differs from enumerated %s", count, len(trees))
    return trees


# ----------------------------- кліки -----------------------------

def _max_clique_size(n: int, nbrs: Sequence[frozenset]) -> int:
    best = 0

    def _expand(r: int, p: set, x: set) -> None:
        nonlocal best
        if not p and not x:
            best = max(best, r)
            return
        if r + len(p) <= best:
            return
        pivot = max(p | x, key=lambda u: len(p & nbrs[u]))
        for v in sorted(p - nbrs[pivot]):
            _expand(r + 1, p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    _expand(0, set(range(n)), set())
    return best


def clique_number_complement(g: Graph, limit: int | None = None) -> Tuple[int, int]:
    """Повертає (ω(Ḡ), c1 = n − ω(Ḡ)) точним Брона–Кербоша з півотом."""
    limit = Config.CLIQUE_EXACT_LIMIT if limit is None else limit
    if g.n > limit:
        raise EnumerationLimitError(f"exceeds exact limit: n={g.n} > {limit}")
    omega = _max_clique_size(g.n, complement(g).neighbors)
    return omega, g.n - omega


# ----------------------------- покриття деревами -----------------------------

def search_tree_cover(
    g: Graph,
    trees: Sequence[SpanningTree],
    size_cap: int,
    costs: Optional[Sequence[float]] = None,
) -> Optional[Tuple[float, Tuple[int, ...]]]:
    """
    Мінімальна сумарна вартість покриття ребер G не більше ніж size_cap
    деревами. Без costs кожне дерево коштує 1, тобто мінімізується кількість.
    Повертає (вартість, індекси дерев) або None.
    """
    m = g.num_edges
    full = (1 << m) - 1
    weights = [1.0] * len(trees) if costs is None else [float(c) for c in costs]
    if m == 0:
        # покриття містить щонайменше одне дерево
        if not trees or size_cap < 1:
            return None
        k = min(range(len(trees)), key=weights.__getitem__)
        return weights[k], (k,)
    masks = []
    for t in trees:
        mask = 0
        for e in t.edges:
            mask |= 1 << g.edge_index[e]
        masks.append(mask)
    by_edge = [[k for k, mask in enumerate(masks) if mask >> e & 1] for e in range(m)]
    per_tree = max(g.n - 1, 1)

    @lru_cache(maxsize=None)
    def _best(covered: int, left: int):
        if covered == full:
            return 0.0, ()
        uncovered = full & ~covered
        if left == 0 or bin(uncovered).count("1") > left * per_tree:
            return None
        e = (uncovered & -uncovered).bit_length() - 1
        result = None
        for k in by_edge[e]:
            sub = _best(covered | masks[k], left - 1)
            if sub is None:
                continue
            total = weights[k] + sub[0]
            if result is None or total < result[0]:
                result = (total, (k,) + sub[1])
        return result

    found = _best(0, size_cap)
    _best.cache_clear()
    if found is None:
        return None
    return found[0], tuple(sorted(found[1]))


def min_tree_cover(g: Graph, size_cap: int, tree_cap: int | None = None) -> TreeCover:
    trees = enumerate_spanning_trees(g, cap=tree_cap)
    found = search_tree_cover(g, trees, size_cap)
    if found is None:
        raise EnumerationLimitError(f"no cover within cap {size_cap}")
    cover = TreeCover(tuple(trees[k] for k in found[1]))
    if g.n <= Config.CLIQUE_EXACT_LIMIT:
        _, c1 = clique_number_complement(g)
        if c1 <= size_cap and len(cover) > max(c1, 1):
            raise BoundViolationError(f"minimal cover has {len(cover)} trees, above c1={c1}")
    return cover
