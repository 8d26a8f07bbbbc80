# scripts/sbm_trend.py
# GCN проти R: двоблокова SBM (обидва > 0.9) і 4-блокова SBM на 10 зернах
# (середнє R ≥ GCN, R ≥ GCN щонайменше на 8 зернах). Код виходу 1, якщо тренд не виконано.
import os
import sys
import time

import numpy as np

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

from app import create_app
from modules.gnn.datasets import sbm_dataset
from modules.gnn.models import TrainConfig
from modules.gnn.services import AnalysisContext, default_split, train

SEEDS = range(10)
MIN_WINS = 8
VARIANTS = ("gcn", "r")
TWO_BLOCK = dict(block_sizes=(100, 100), p_in=0.2, p_out=0.01)
TWO_BLOCK_MIN_ACC = 0.9


def _accuracies(data, seed):
    split = default_split(data, seed)
    analysis = AnalysisContext(data.graph)
    out = {}
    for variant in VARIANTS:
        _, metrics = train(data.graph, data.features, data.labels, split,
                           TrainConfig(variant=variant, seed=seed),
                           num_classes=data.num_classes, analysis=analysis)
        out[variant] = metrics.test_acc
    return out


def main():
    create_app()
    ok = True

    t0 = time.perf_counter()
    two = _accuracies(sbm_dataset(seed=0, **TWO_BLOCK), 0)
    print("two blocks: " + ", ".join(f"{v}={a:.3f}" for v, a in two.items())
          + f" ({time.perf_counter() - t0:.1f}s)")
    ok &= all(a > TWO_BLOCK_MIN_ACC for a in two.values())

    t0 = time.perf_counter()
    acc = {v: [] for v in VARIANTS}
    for seed in SEEDS:
        for variant, a in _accuracies(sbm_dataset(seed=seed), seed).items():
            acc[variant].append(a)
        print(f"seed {seed}: " + ", ".join(f"{v}={acc[v][-1]:.3f}" for v in VARIANTS))

    gcn, reg = np.array(acc["gcn"]), np.array(acc["r"])
    wins = int((reg >= gcn).sum())
    print(f"mean GCN {gcn.mean():.3f}, mean R {reg.mean():.3f}, "
          f"R >= GCN in {wins}/{len(gcn)} seeds ({time.perf_counter() - t0:.1f}s)")
    ok &= bool(reg.mean() >= gcn.mean()) and wins >= MIN_WINS
    print("trend holds" if ok else "trend FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
