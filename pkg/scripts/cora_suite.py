# scripts/cora_suite.py
# Варіанти GCN/R/R1/R2/R3 на Cora: точність, частка високих частот стовпця 1,
# кількість ваг поблизу 1/7 та поблизу 1. Потрібні cora.content і cora.cites у DISTSIG_DATA_DIR.
import os
import sys
import time

import numpy as np

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

from app import create_app
from modules.gnn.datasets import cora_dataset, dataset_summary
from modules.gnn.models import TrainConfig
from modules.gnn.services import AnalysisContext, default_split, train
from modules.regularizer.services import NEAR_ONE, NEAR_UNIFORM

SEEDS = range(5)
MIN_SEEDS = 4
GCN_ACC_RANGE = (0.79, 0.83)
MIN_GAIN = 0.01
VARIANTS = ("gcn", "r", "r1", "r2", "r3")
EPS = 0.01


def _count(sweep, kind):
    return next(c for eps, k, c, _ in sweep if k == kind and eps == EPS)


def main():
    create_app()
    try:
        data = cora_dataset()
    except FileNotFoundError as e:
        print(f"Cora not available: {e}")
        return 0
    print("Dataset:", dataset_summary(data.graph, data.features, data.labels))

    t0 = time.perf_counter()
    analysis = AnalysisContext(data.graph)
    rows = {v: [] for v in VARIANTS}
    for seed in SEEDS:
        split = default_split(data, seed)
        for variant in VARIANTS:
            _, m = train(data.graph, data.features, data.labels, split,
                         TrainConfig(variant=variant, seed=seed),
                         num_classes=data.num_classes, analysis=analysis)
            rows[variant].append((m.test_acc, m.hf_fraction_per_class[1],
                                  _count(m.nonuniformity_sweep, NEAR_UNIFORM),
                                  _count(m.nonuniformity_sweep, NEAR_ONE)))
            print(f"seed {seed} {variant:>3}: acc={m.test_acc:.4f} hf1={m.hf_fraction_per_class[1]:.4f}")

    for variant in VARIANTS:
        arr = np.array(rows[variant])
        print(f"{variant:>3}: acc {100 * arr[:, 0].mean():.2f} ± {100 * arr[:, 0].std():.2f}, "
              f"hf1 {arr[:, 1].mean():.4f}, near 1/7 {arr[:, 2].mean():.0f}, near 1 {arr[:, 3].mean():.0f}")

    gcn, reg = np.array(rows["gcn"]), np.array(rows["r"])
    mean_acc = {v: np.array(rows[v])[:, 0].mean() for v in VARIANTS}
    gain = (reg[:, 0] - gcn[:, 0]).mean()
    shrink = int((reg[:, 1] < gcn[:, 1]).sum())
    fewer_uniform = int((reg[:, 2] < gcn[:, 2]).sum())
    more_one = int((reg[:, 3] > gcn[:, 3]).sum())
    print(f"R - GCN: {100 * gain:+.2f} points")
    print(f"hf1 shrinkage in {shrink}/{len(SEEDS)} seeds")
    print(f"fewer near-uniform weights in {fewer_uniform}/{len(SEEDS)} seeds, "
          f"more near-one weights in {more_one}/{len(SEEDS)} seeds")
    print(f"Total {time.perf_counter() - t0:.1f}s")

    checks = {
        "gcn accuracy": GCN_ACC_RANGE[0] <= mean_acc["gcn"] <= GCN_ACC_RANGE[1],
        "r gain": gain >= MIN_GAIN,
        "ablation order": (mean_acc["r"] >= mean_acc["r1"] and mean_acc["r"] >= mean_acc["r2"]
                           and all(mean_acc["r3"] < mean_acc[v] for v in ("r", "r1", "r2"))),
        "spectral shrinkage": shrink >= MIN_SEEDS,
        "non-uniformity": fewer_uniform >= MIN_SEEDS and more_one >= MIN_SEEDS,
    }
    failed = [name for name, passed in checks.items() if not passed]
    print("all trends hold" if not failed else f"FAILED: {', '.join(failed)}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
