# modules/graph_core/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Tuple

import numpy as np

from errors import InvalidGraphError

Edge = Tuple[int, int]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass(frozen=True)
class Graph:
    """
    Простий неорієнтований граф. Ребра зберігаються як відсортований кортеж
    пар (u, v) з u < v, матричні подання рахуються ліниво і лише для читання.
    """
    n: int
    edges: Tuple[Edge, ...]

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        return _frozen(arr)

    @cached_property
    def edge_index(self) -> dict:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=float)
        if self.edges:
            u, v = self.edge_array[:, 0], self.edge_array[:, 1]
            a[u, v] = 1.0
            a[v, u] = 1.0
        return _frozen(a)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.edges:
            np.add.at(deg, self.edge_array[:, 0], 1)
            np.add.at(deg, self.edge_array[:, 1], 1)
        return _frozen(deg)

    @cached_property
    def neighbors(self) -> Tuple[frozenset, ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        uf = _UnionFind(self.n)
        merged = sum(uf.union(u, v) for u, v in self.edges)
        return merged == self.n - 1

    def is_tree(self) -> bool:
        return self.num_edges == self.n - 1 and self.is_connected()


@dataclass(frozen=True)
class SpanningTree:
    """Кістякове дерево хост-графа; root/parent заповнені лише для кореневого."""
    n: int
    edges: Tuple[Edge, ...]
    root: Optional[int] = None
    parent: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.edges) != max(self.n - 1, 0):
            raise InvalidGraphError(
                f"spanning tree on {self.n} nodes needs {self.n - 1} edges, got {len(self.edges)}"
            )
        uf = _UnionFind(self.n)
        for u, v in self.edges:
            if not uf.union(u, v):
                raise InvalidGraphError(f"spanning tree contains a cycle through edge {(u, v)}")

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def check_host(self, g: Graph) -> None:
        if g.n != self.n:
            raise InvalidGraphError(f"tree has {self.n} nodes, host graph has {g.n}")
        foreign = [e for e in self.edges if e not in g.edge_index]
        if foreign:
            raise InvalidGraphError(f"tree edges not in host graph: {foreign}")

    def rooted(self, v0: int) -> "SpanningTree":
        if not 0 <= v0 < self.n:
            raise InvalidGraphError(f"root {v0} out of range for {self.n} nodes")
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        parent = [-1] * self.n
        seen = [False] * self.n
        seen[v0] = True
        stack = [v0]
        while stack:
            u = stack.pop()
            for w in sorted(adj[u]):
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    stack.append(w)
        return SpanningTree(self.n, self.edges, root=v0, parent=tuple(parent))

    @cached_property
    def depth(self) -> Tuple[int, ...]:
        if self.parent is None:
            raise InvalidGraphError("depth requires a rooted tree")
        depth = [-1] * self.n
        depth[self.root] = 0
        for v in range(self.n):
            chain = []
            while depth[v] < 0:
                chain.append(v)
                v = self.parent[v]
            d = depth[v]
            for u in reversed(chain):
                d += 1
                depth[u] = d
        return tuple(depth)

    def path_from_ancestor(self, ancestor: int, v: int) -> list:
        """Вузли на шляху ancestor → v (напрям від кореня), включно з обома кінцями."""
        path = [v]
        while v != ancestor:
            v = self.parent[v]
            if v < 0:
                raise InvalidGraphError(f"{ancestor} is not an ancestor of {path[0]}")
            path.append(v)
        path.reverse()
        return path

    def meet(self, i: int, j: int) -> int:
        """Інший кінець спільної частини шляхів від кореня до i та j."""
        depth = self.depth
        while depth[i] > depth[j]:
            i = self.parent[i]
        while depth[j] > depth[i]:
            j = self.parent[j]
        while i != j:
            i, j = self.parent[i], self.parent[j]
        return i


@dataclass(frozen=True)
class TreeCover:
    trees: Tuple[SpanningTree, ...]

    def __len__(self) -> int:
        return len(self.trees)

    def covered_edges(self) -> frozenset:
        out: set = set()
        for t in self.trees:
            out.update(t.edges)
        return frozenset(out)

    def covers(self, g: Graph) -> bool:
        return self.covered_edges() == frozenset(g.edges)


def canonical_edges(pairs: Iterable[Edge]) -> Tuple[Edge, ...]:
    return tuple(sorted((min(u, v), max(u, v)) for u, v in pairs))
