# modules/dist_signal/bounds.py
# -*- coding: utf-8 -*-
"""
Перевірка ланцюгів нерівностей між T_{G,2}, T_{G,1}, T_G, T^c_G і T_{G,H,v0}
на окремих екземплярах і на сідованому корпусі випадкових екземплярів.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import Config
from extensions import make_rng
from modules.graph_core.models import Graph
from modules.graph_core.services import build_graph, clique_number_complement, enumerate_spanning_trees
from .models import BoundReport, Marginals
from .services import tv_cover, tv_exact, tv_l1_l2, tv_tree_rooted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundsConfig:
    tolerance: float = Config.BOUND_TOL
    cover_cap: Optional[int] = None
    tree_cap: Optional[int] = None
    state_cap: Optional[int] = None


@dataclass
class BoundsSuiteReport:
    seed: int
    trials: int
    n_max: int
    m: int
    records: List[BoundReport] = field(default_factory=list)

    @property
    def violation_count(self) -> int:
        return sum(len(r.violations) for r in self.records)

    @property
    def c3_nodes_pass_rate(self) -> float:
        if not self.records:
            return 1.0
        return sum(r.c3_nodes_holds for r in self.records) / len(self.records)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "n_max": self.n_max,
            "m": self.m,
            "violations": [
                {"instance": k, "violations": r.violations}
                for k, r in enumerate(self.records) if r.violations
            ],
            "violation_count": self.violation_count,
            "c3_nodes_pass_rate": self.c3_nodes_pass_rate,
            "instances": [r.as_dict() for r in self.records],
        }


# ----------------------------- один екземпляр -----------------------------

def check_bounds(g: Graph, marginals: Marginals, cfg: BoundsConfig = BoundsConfig()) -> BoundReport:
    tol = cfg.tolerance
    tg1, tg2 = tv_l1_l2(g, marginals)
    tge = tv_exact(g, marginals, state_cap=cfg.state_cap)
    _, c1 = clique_number_complement(g)
    tcov = tv_cover(g, marginals, size_cap=cfg.cover_cap, tree_cap=cfg.tree_cap).value

    tghv = [
        tv_tree_rooted(g, tree, v0, marginals)
        for tree in enumerate_spanning_trees(g, cap=cfg.tree_cap)
        for v0 in range(g.n)
    ]
    tghv_min, tghv_max = (min(tghv), max(tghv)) if tghv else (0.0, 0.0)

    m = marginals.m
    c3 = math.sqrt(m * g.num_edges)
    c3_nodes = math.sqrt(m * g.n)
    low = 2.0 * min(tcov, tge)
    root_tg2 = math.sqrt(max(tg2, 0.0))

    # запас кожної нерівності lhs ≤ rhs: rhs − lhs
    margins: Dict[str, float] = {
        "tg2<=tg1": tg1 - tg2,
        "tg1<=2*min(tcov,tg)": low - tg1,
        "2*min(tcov,tg)<=c1*tg1": c1 * tg1 - low,
        "tg1<=c3*sqrt(tg2)": c3 * root_tg2 - tg1,
        "c1*tg1<=c1*c3*sqrt(tg2)": c1 * c3 * root_tg2 - c1 * tg1,
        "tg1<=2*tg": 2.0 * tge - tg1,
        "2*tg<=tghv": tghv_min - 2.0 * tge,
    }
    violations = [name for name, margin in margins.items() if margin < -tol]
    if violations:
        logger.warning("bound violations %s on graph n=%s edges=%s", violations, g.n, g.edges)

    return BoundReport(
        graph={"n": g.n, "edges": [list(e) for e in g.edges]},
        marginals=marginals.matrix.tolist(),
        tg1=tg1,
        tg2=tg2,
        tg_exact=tge,
        tcov=tcov,
        tghv_min=tghv_min,
        tghv_max=tghv_max,
        c1=c1,
        c3=c3,
        c3_nodes=c3_nodes,
        c3_nodes_holds=bool(c3_nodes * root_tg2 - tg1 >= -tol),
        margins=margins,
        violations=violations,
    )


# ----------------------------- корпус -----------------------------

def random_instance(rng: np.random.Generator, n_max: int, m: int) -> Tuple[Graph, Marginals]:
    """Зв'язний граф на 2…n_max вузлах (випадкове дерево + ребра з імовірністю ½) і маргінали Діріхле(1,…,1)."""
    n = int(rng.integers(2, n_max + 1))
    edges = {(int(rng.integers(0, v)), v) for v in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < 0.5:
                edges.add((u, v))
    marginals = Marginals(rng.dirichlet(np.ones(m), size=n))
    return build_graph(n, sorted(edges)), marginals


def _run_one(args) -> BoundReport:
    seed_seq, n_max, m, cfg = args
    g, marginals = random_instance(make_rng(seed_seq), n_max, m)
    return check_bounds(g, marginals, cfg)


def run_bounds_suite(
    trials: int,
    n_max: int,
    m: int,
    seed: int,
    jobs: int = 1,
    cfg: BoundsConfig = BoundsConfig(),
) -> BoundsSuiteReport:
    children = np.random.SeedSequence(seed).spawn(trials)
    tasks = [(child, n_max, m, cfg) for child in children]
    report = BoundsSuiteReport(seed=seed, trials=trials, n_max=n_max, m=m)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            report.records = list(pool.map(_run_one, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        report.records = [_run_one(t) for t in tasks]
    logger.info(
        "bounds suite: %s instances, %s violations, c3(nodes) pass rate %.3f",
        trials, report.violation_count, report.c3_nodes_pass_rate,
    )
    return report
