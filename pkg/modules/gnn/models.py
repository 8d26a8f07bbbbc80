# modules/gnn/models.py
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import Config
from errors import DimensionMismatchError, SplitError
from modules.graph_core.models import Graph

VARIANTS = ("gcn", "r", "r1", "r2", "r3", "lap")


@dataclass(frozen=True)
class GcnParams:
    """θ = (W1: f×h, W2: h×m), без зсувів."""
    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        if self.w1.ndim != 2 or self.w2.ndim != 2 or self.w1.shape[1] != self.w2.shape[0]:
            raise DimensionMismatchError(f"incompatible weights {self.w1.shape} and {self.w2.shape}")
        if not (np.all(np.isfinite(self.w1)) and np.all(np.isfinite(self.w2))):
            raise ValueError("non-finite model parameters")

    def copy(self) -> "GcnParams":
        return GcnParams(self.w1.copy(), self.w2.copy())


@dataclass(frozen=True)
class FeatureMatrix:
    """F: n×f, рядки з ненульовою сумою нормовано до 1."""
    values: np.ndarray

    def __post_init__(self):
        f = np.array(self.values, dtype=float)
        if f.ndim != 2:
            raise DimensionMismatchError(f"feature matrix must be 2-D, got shape {f.shape}")
        if not np.all(np.isfinite(f)):
            raise ValueError("non-finite features")
        sums = f.sum(axis=1)
        nz = sums != 0
        if np.any(np.abs(sums[nz] - 1.0) > 1e-9):
            raise ValueError("feature rows are not normalized; use FeatureMatrix.normalized")
        f.flags.writeable = False
        object.__setattr__(self, "values", f)

    @classmethod
    def normalized(cls, raw) -> "FeatureMatrix":
        f = np.array(raw, dtype=float)
        sums = f.sum(axis=1, keepdims=True)
        f = np.divide(f, sums, out=np.zeros_like(f), where=sums != 0)
        return cls(f)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class Split:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    seed: int

    def __post_init__(self):
        parts = [np.asarray(p, dtype=np.int64).reshape(-1) for p in (self.train, self.val, self.test)]
        merged = np.concatenate(parts)
        if np.unique(merged).size != merged.size:
            raise SplitError("train/val/test sets overlap")
        for name, p in zip(("train", "val", "test"), parts):
            p.flags.writeable = False
            object.__setattr__(self, name, p)

    def check_range(self, n: int) -> None:
        for p in (self.train, self.val, self.test):
            if p.size and (p.min() < 0 or p.max() >= n):
                raise SplitError(f"split index out of range for {n} nodes")


@dataclass(frozen=True)
class TrainConfig:
    variant: str = "gcn"
    eta: float = Config.ETA
    hidden: int = Config.HIDDEN
    epochs: int = Config.EPOCHS
    learning_rate: float = Config.LEARNING_RATE
    weight_decay: float = Config.WEIGHT_DECAY
    dropout: float = Config.DROPOUT
    seed: int = 0
    snapshot_epochs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variant", self.variant.lower())
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {self.dropout}")
        object.__setattr__(self, "snapshot_epochs", tuple(sorted(int(e) for e in self.snapshot_epochs)))

    def as_dict(self) -> dict:
        out = asdict(self)
        out["snapshot_epochs"] = list(self.snapshot_epochs)
        return out


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float            # повна втрата кроку навчання (з dropout)
    cross_entropy: float
    regularizer: float     # значення регуляризатора без множника η
    acc_train: float
    loss_val: float
    acc_val: float


@dataclass
class Metrics:
    config: dict
    per_epoch: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_acc: float = 0.0
    test_acc: float = 0.0
    hf_fraction_per_class: List[float] = field(default_factory=list)
    nonuniformity_sweep: List[tuple] = field(default_factory=list)
    snapshots: Dict[int, List[float]] = field(default_factory=dict)
    dataset: Optional[dict] = None
    # параметри останньої епохи; у JSON не пишуться
    final_params: Optional[GcnParams] = field(default=None, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "dataset": self.dataset,
            "per_epoch": [asdict(r) for r in self.per_epoch],
            "best_epoch": self.best_epoch,
            "best_val_acc": self.best_val_acc,
            "test_acc": self.test_acc,
            "hf_fraction_per_class": list(self.hf_fraction_per_class),
            "nonuniformity_sweep": [
                {"epsilon": eps, "kind": kind, "count": count, "model_tag": tag}
                for eps, kind, count, tag in self.nonuniformity_sweep
            ],
            "snapshots": {str(k): v for k, v in self.snapshots.items()},
        }


@dataclass(frozen=True)
class Dataset:
    name: str
    graph: Graph
    features: FeatureMatrix
    labels: np.ndarray
    class_names: Tuple[str, ...] = ()

    @property
    def num_classes(self) -> int:
        if self.class_names:
            return len(self.class_names)
        return int(self.labels.max()) + 1 if self.labels.size else 0
