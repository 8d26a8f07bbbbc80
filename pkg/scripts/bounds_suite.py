# scripts/bounds_suite.py
# Оракул для W² і ланцюги нерівностей на сідованому корпусі.
import os
import sys
import time

import numpy as np

# --- зробити видимим корінь проєкту для імпортів ---
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

from app import create_app
from extensions import make_rng
from modules.dist_signal.bounds import run_bounds_suite
from modules.dist_signal.services import coupling_lp_oracle, optimal_coupling, wasserstein_sq

PAIRS = 1000
TRIALS = 500
N_MAX = 6
M = 3
SEED = 2024


def check_oracle(pairs: int, seed: int) -> int:
    rng = make_rng(seed)
    bad = 0
    for _ in range(pairs):
        m = int(rng.integers(2, 6))
        mu, nu = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(m))
        if abs(wasserstein_sq(mu, nu) - coupling_lp_oracle(mu, nu)) > 1e-9:
            bad += 1
        if not np.array_equal(np.diag(optimal_coupling(mu, nu).matrix), np.minimum(mu, nu)):
            bad += 1
    return bad


def main():
    create_app()

    t0 = time.perf_counter()
    bad = check_oracle(PAIRS, SEED)
    print(f"W² vs LP oracle: {PAIRS} pairs, {bad} mismatches ({time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    jobs = os.cpu_count() or 1
    report = run_bounds_suite(TRIALS, N_MAX, M, SEED, jobs=jobs)
    print(f"Bounds: {TRIALS} instances, {report.violation_count} violations "
          f"({time.perf_counter() - t0:.1f}s)")
    print(f"c3 = sqrt(|S| n) pass rate: {report.c3_nodes_pass_rate:.3f}")
    return 0 if bad == 0 and report.violation_count == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
