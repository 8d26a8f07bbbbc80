import os

basedir = os.path.abspath(os.path.dirname(__file__))


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw not in (None, "") else default


class Config:
    # Корінь датасетів: спочатку власна змінна, далі ./data поруч із кодом
    DATA_DIR = os.environ.get("DISTSIG_DATA_DIR") or os.path.join(basedir, "data")
    LOG_LEVEL = os.environ.get("DISTSIG_LOG_LEVEL", "INFO")

    # ── точні переборні алгоритми
    CLIQUE_EXACT_LIMIT = _env_int("DISTSIG_CLIQUE_EXACT_LIMIT", 32)
    SPANNING_TREE_CAP = _env_int("DISTSIG_SPANNING_TREE_CAP", 2000)
    JOINT_STATE_CAP = _env_int("DISTSIG_JOINT_STATE_CAP", 729)  # 3**6
    ORACLE_MAX_LABELS = 6

    # ── чисельні допуски
    SYMMETRY_TOL = 1e-10
    ORTHONORMAL_TOL = 1e-8
    PSD_TOL = 1e-10
    JACOBI_TOL = 1e-12
    JACOBI_MAX_SWEEPS = 100
    # Більші матриці (головна компонента Cora) йдуть у LAPACK
    JACOBI_MAX_N = _env_int("DISTSIG_JACOBI_MAX_N", 64)
    LP_PIVOT_TOL = 1e-12
    LP_FEASIBILITY_TOL = 1e-9
    LP_MAX_ITERATIONS = 50_000
    BOUND_TOL = 1e-9
    DISTRIBUTION_TOL = 1e-9
    PROB_MATRIX_TOL = 1e-7

    # ── GCN (стандартна конфігурація базової моделі)
    HIDDEN = 16
    DROPOUT = 0.5
    LEARNING_RATE = 0.01
    WEIGHT_DECAY = 5e-4
    EPOCHS = _env_int("DISTSIG_EPOCHS", 200)
    ETA = _env_float("DISTSIG_ETA", 0.5)
    ETA_GRID = (0.1, 0.2, 0.5, 1.0)

    # ── датасети
    SBM_FEATURE_DIM = 64
    SBM_BLOCKS = (50, 50, 50, 50)
    SBM_P_IN = 0.1
    SBM_P_OUT = 0.01
    SBM_PER_CLASS = 5
    SBM_VAL_SIZE = 40
    PER_CLASS = 20
    VAL_SIZE = 500
    TEST_SIZE = 1000
    CORA_CONTENT = "cora.content"
    CORA_CITES = "cora.cites"
    CORA_FEATURE_DIM = 1433

    # ── аналіз
    HF_CUT = 0.5
    NONUNIFORMITY_EPS = (0.005, 0.01, 0.02, 0.05)
