# modules/gnn/services.py
# -*- coding: utf-8 -*-
"""
Двошаровий GCN на numpy з ручним зворотним проходом:
    O = Â · ReLU(Â F W1) · W2,  X = softmax(O).
Втрата: маскована крос-ентропія по навчальних вузлах + η·регуляризатор
варіанта по ВСІХ вузлах, поділений на об'єм графа 2|E|, + weight decay на W1.
Оптимізатор Adam.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import log_softmax

from config import Config
from errors import DimensionMismatchError, SplitError, TrainingDivergedError
from extensions import make_rng
from modules.graph_core.models import Graph
from modules.graph_core.services import main_component, normalized_adjacency
from modules.regularizer.models import ProbMatrix, WeightDiag
from modules.regularizer.services import (
    default_weight_diag,
    grad_loss0,
    loss_components,
    nonuniformity_sweep,
    smoothness_grad,
    smoothness_trace,
    softmax_backward,
    softmax_rows,
)
from modules.spectral.models import Spectrum
from modules.spectral.services import column_hf_fractions, laplacian_spectrum
from .models import Dataset, EpochRecord, FeatureMatrix, GcnParams, Metrics, Split, TrainConfig
from .optim import Adam

logger = logging.getLogger(__name__)

# варіанти, чий регуляризатор входить у втрату (LAP лише логується)
_DIFFERENTIABLE = ("r", "r1", "r2", "r3")


# ----------------------------- спліти -----------------------------

def make_split(
    labels: Sequence[int],
    per_class: int = Config.PER_CLASS,
    val_size: int = Config.VAL_SIZE,
    test_size: Optional[int] = Config.TEST_SIZE,
    seed: int = 0,
) -> Split:
    """
    per_class навчальних вузлів з кожного класу (сідоване перемішування),
    далі val_size і test_size із залишку. test_size=None: увесь залишок.
    """
    labels = np.asarray(labels, dtype=np.int64)
    rng = make_rng(seed)
    train: List[np.ndarray] = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if members.size < per_class:
            raise SplitError(f"class {int(c)} has {members.size} nodes, need {per_class}")
        train.append(rng.permutation(members)[:per_class])
    train_idx = np.sort(np.concatenate(train)) if train else np.zeros(0, dtype=np.int64)

    rest = np.setdiff1d(np.arange(labels.size), train_idx)
    rest = rng.permutation(rest)
    if test_size is None:
        test_size = rest.size - val_size
    if val_size < 0 or test_size < 0 or val_size + test_size > rest.size:
        raise SplitError(
            f"insufficient nodes: {rest.size} left after training set, need {val_size} + {test_size}"
        )
    val_idx = np.sort(rest[:val_size])
    test_idx = np.sort(rest[val_size:val_size + test_size])
    return Split(train=train_idx, val=val_idx, test=test_idx, seed=seed)


# ----------------------------- прямий прохід -----------------------------

@dataclass(frozen=True)
class DropoutState:
    """Інвертований dropout; маски тягнуться з переданого генератора."""
    rate: float
    rng: np.random.Generator

    def mask(self, shape) -> Optional[np.ndarray]:
        if self.rate <= 0.0:
            return None
        return (self.rng.random(shape) >= self.rate) / (1.0 - self.rate)


@dataclass(frozen=True)
class ForwardCache:
    fd: np.ndarray              # F після dropout
    z1: np.ndarray              # Â F W1 до ReLU
    hd: np.ndarray              # ReLU(z1) після dropout
    m2: Optional[np.ndarray]


@dataclass(frozen=True)
class ForwardResult:
    o: np.ndarray
    x: ProbMatrix
    cache: ForwardCache


def _feature_values(features) -> np.ndarray:
    return features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=float)


def gcn_forward(
    params: GcnParams,
    adj_hat: np.ndarray,
    features,
    dropout: Optional[DropoutState] = None,
) -> ForwardResult:
    f = _feature_values(features)
    n = f.shape[0]
    if adj_hat.shape != (n, n):
        raise DimensionMismatchError(f"propagation matrix {adj_hat.shape} vs {n} feature rows")
    if f.shape[1] != params.w1.shape[0]:
        raise DimensionMismatchError(f"feature dim {f.shape[1]} vs W1 rows {params.w1.shape[0]}")

    m1 = dropout.mask(f.shape) if dropout is not None else None
    fd = f * m1 if m1 is not None else f
    z1 = adj_hat @ (fd @ params.w1)
    h = np.maximum(z1, 0.0)
    m2 = dropout.mask(h.shape) if dropout is not None else None
    hd = h * m2 if m2 is not None else h
    o = adj_hat @ (hd @ params.w2)
    if not np.all(np.isfinite(o)):
        raise FloatingPointError("non-finite activations")
    return ForwardResult(o=o, x=softmax_rows(o), cache=ForwardCache(fd=fd, z1=z1, hd=hd, m2=m2))


def init_params(f: int, h: int, m: int, rng: np.random.Generator) -> GcnParams:
    """Ініціалізація Глоро (рівномірна)."""
    def glorot(fan_in: int, fan_out: int) -> np.ndarray:
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-limit, limit, size=(fan_in, fan_out))

    w1 = glorot(f, h)
    w2 = glorot(h, m)
    return GcnParams(w1, w2)


# ----------------------------- контекст і аналіз -----------------------------

@dataclass
class AnalysisContext:
    """Головна компонента зв'язності та її спектр, рахуються один раз."""
    graph: Graph

    @cached_property
    def main(self) -> Tuple[Graph, np.ndarray]:
        return main_component(self.graph)

    @cached_property
    def spectrum(self) -> Spectrum:
        return laplacian_spectrum(self.main[0])

    def hf_fraction_per_class(self, x, cut: float = Config.HF_CUT, center: bool = True) -> List[float]:
        xv = x.values if isinstance(x, ProbMatrix) else np.asarray(x, dtype=float)
        _, nodes = self.main
        return column_hf_fractions(self.spectrum, xv[nodes], cut=cut, center=center)


@dataclass
class GcnContext:
    graph: Graph
    adj_hat: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    train: np.ndarray
    num_classes: int
    weights: WeightDiag
    # множник регуляризатора у втраті: 1 / vol(G)
    reg_scale: float = 1.0
    analysis: AnalysisContext = field(repr=False, default=None)

    @cached_property
    def train_targets(self) -> np.ndarray:
        y = np.zeros((self.train.size, self.num_classes))
        y[np.arange(self.train.size), self.labels[self.train]] = 1.0
        return y


def build_context(
    g: Graph,
    features,
    labels: Sequence[int],
    split: Split,
    num_classes: Optional[int] = None,
    analysis: Optional[AnalysisContext] = None,
) -> GcnContext:
    f = _feature_values(features)
    labels = np.asarray(labels, dtype=np.int64)
    if f.shape[0] != g.n or labels.size != g.n:
        raise DimensionMismatchError(f"graph has {g.n} nodes, features {f.shape[0]}, labels {labels.size}")
    split.check_range(g.n)
    if analysis is not None and analysis.graph is not g and analysis.graph != g:
        raise DimensionMismatchError("analysis context belongs to a different graph")
    if split.train.size == 0:
        raise SplitError("empty training set")
    m = num_classes if num_classes is not None else int(labels.max()) + 1
    return GcnContext(
        graph=g,
        adj_hat=normalized_adjacency(g),
        features=f,
        labels=labels,
        train=split.train,
        num_classes=m,
        weights=default_weight_diag(g),
        reg_scale=1.0 / max(2 * g.num_edges, 1),
        analysis=analysis if analysis is not None else AnalysisContext(g),
    )


# ----------------------------- втрата і градієнти -----------------------------

@dataclass(frozen=True)
class LossParts:
    total: float
    cross_entropy: float
    regularizer: float
    weight_decay: float


def _cross_entropy(o: np.ndarray, labels: np.ndarray, nodes: np.ndarray) -> float:
    if nodes.size == 0:
        return 0.0
    logp = log_softmax(o[nodes], axis=1)
    return -float(logp[np.arange(nodes.size), labels[nodes]].mean())


def _regularizer(variant: str, o: np.ndarray, x: ProbMatrix, ctx: GcnContext):
    """(значення без η, ∂/∂O або None)."""
    g, d = ctx.graph, ctx.weights
    if variant == "gcn":
        return 0.0, None
    if variant == "r":
        _, _, l0 = loss_components(x, g, d)
        return l0, softmax_backward(x, grad_loss0(x, g, d))
    if variant == "r1":
        return smoothness_trace(g, x), softmax_backward(x, smoothness_grad(g, x))
    if variant == "r2":
        _, l2, _ = loss_components(x, g, d)
        return l2, softmax_backward(x, 2.0 * d.a[:, None] * x.values)
    if variant == "r3":
        return smoothness_trace(g, o), smoothness_grad(g, o)
    if variant == "lap":
        one_hot = ProbMatrix.one_hot(np.argmax(x.values, axis=1), x.m)
        _, _, l0 = loss_components(one_hot, g, d)
        return l0, None
    raise ValueError(f"unknown variant {variant!r}")


def loss_and_grads(
    params: GcnParams,
    ctx: GcnContext,
    cfg: TrainConfig,
    dropout: Optional[DropoutState] = None,
) -> Tuple[LossParts, Tuple[np.ndarray, np.ndarray], ForwardResult]:
    fwd = gcn_forward(params, ctx.adj_hat, ctx.features, dropout)
    o, x = fwd.o, fwd.x
    train = ctx.train

    ce = _cross_entropy(o, ctx.labels, train)
    d_o = np.zeros_like(o)
    d_o[train] = (x.values[train] - ctx.train_targets) / train.size

    reg, d_reg = _regularizer(cfg.variant, o, x, ctx)
    reg_in_loss = cfg.variant in _DIFFERENTIABLE
    weight = cfg.eta * ctx.reg_scale
    if weight and d_reg is not None:
        d_o += weight * d_reg

    wd = 0.5 * cfg.weight_decay * float((params.w1 * params.w1).sum())
    total = ce + wd + (weight * reg if reg_in_loss else 0.0)

    # зворотний прохід через O = Â (Hd W2), H = ReLU(Â (Fd W1))
    c = fwd.cache
    d_q = ctx.adj_hat.T @ d_o
    g_w2 = c.hd.T @ d_q
    d_h = d_q @ params.w2.T
    if c.m2 is not None:
        d_h *= c.m2
    d_z1 = d_h * (c.z1 > 0)
    g_w1 = c.fd.T @ (ctx.adj_hat.T @ d_z1) + cfg.weight_decay * params.w1

    parts = LossParts(total=total, cross_entropy=ce, regularizer=float(reg), weight_decay=wd)
    return parts, (g_w1, g_w2), fwd


# ----------------------------- навчання -----------------------------

def accuracy(x, labels: np.ndarray, nodes: np.ndarray) -> float:
    """argmax з розв'язанням нічиїх на користь найменшого індексу класу."""
    nodes = np.asarray(nodes, dtype=np.int64)
    if nodes.size == 0:
        return 0.0
    xv = x.values if isinstance(x, ProbMatrix) else np.asarray(x)
    pred = np.argmax(xv[nodes], axis=1)
    return float(np.mean(pred == np.asarray(labels)[nodes]))


def train(
    g: Graph,
    features,
    labels: Sequence[int],
    split: Split,
    cfg: TrainConfig,
    num_classes: Optional[int] = None,
    analysis: Optional[AnalysisContext] = None,
) -> Tuple[GcnParams, Metrics]:
    """
    Повертає параметри з найкращою валідаційною точністю; параметри останньої
    епохи лишаються в metrics.final_params (за ними рахується аналіз).
    """
    ctx = build_context(g, features, labels, split, num_classes, analysis=analysis)
    rng = make_rng(cfg.seed)
    params = init_params(ctx.features.shape[1], cfg.hidden, ctx.num_classes, rng)
    opt = Adam([params.w1.shape, params.w2.shape], cfg.learning_rate)
    dropout = DropoutState(cfg.dropout, rng) if cfg.dropout > 0 else None

    metrics = Metrics(config=cfg.as_dict())
    best = params.copy()
    best_val = -1.0
    fwd = None
    for epoch in range(1, cfg.epochs + 1):
        try:
            parts, grads, _ = loss_and_grads(params, ctx, cfg, dropout)
        except FloatingPointError:
            raise TrainingDivergedError(epoch, float("nan")) from None
        if not np.isfinite(parts.total):
            raise TrainingDivergedError(epoch, parts.total)
        opt.step([params.w1, params.w2], list(grads))

        try:
            fwd = gcn_forward(params, ctx.adj_hat, ctx.features)
        except FloatingPointError:
            raise TrainingDivergedError(epoch, float("nan")) from None
        acc_val = accuracy(fwd.x, ctx.labels, split.val)
        metrics.per_epoch.append(EpochRecord(
            epoch=epoch,
            loss=parts.total,
            cross_entropy=parts.cross_entropy,
            regularizer=parts.regularizer,
            acc_train=accuracy(fwd.x, ctx.labels, split.train),
            loss_val=_cross_entropy(fwd.o, ctx.labels, split.val),
            acc_val=acc_val,
        ))
        # нічия на користь ранішої епохи
        if acc_val > best_val:
            best_val, metrics.best_epoch, best = acc_val, epoch, params.copy()
        if epoch in cfg.snapshot_epochs:
            metrics.snapshots[epoch] = ctx.analysis.hf_fraction_per_class(fwd.x)
        if epoch == 1 or epoch % 50 == 0:
            logger.debug("epoch %s: loss %.4f val acc %.3f", epoch, parts.total, acc_val)

    # аналіз за виходом останньої епохи, тест за найкращими на валідації параметрами
    metrics.final_params = params.copy()
    metrics.hf_fraction_per_class = ctx.analysis.hf_fraction_per_class(fwd.x)
    metrics.nonuniformity_sweep = nonuniformity_sweep(fwd.x, model_tag=cfg.variant)
    metrics.best_val_acc = best_val
    metrics.test_acc = accuracy(gcn_forward(best, ctx.adj_hat, ctx.features).x, ctx.labels, split.test)
    logger.info("trained %s (eta=%s, seed=%s): best epoch %s, val %.3f, test %.3f",
                cfg.variant, cfg.eta, cfg.seed, metrics.best_epoch, best_val, metrics.test_acc)
    return best, metrics


@dataclass(frozen=True)
class Evaluation:
    accuracy: float
    hf_fraction_per_class: List[float]
    nonuniformity_sweep: List[tuple]
    x: ProbMatrix


def evaluate(
    params: GcnParams,
    g: Graph,
    features,
    labels: Sequence[int],
    node_set: Sequence[int],
    model_tag: str = "",
    analysis: Optional[AnalysisContext] = None,
) -> Evaluation:
    fwd = gcn_forward(params, normalized_adjacency(g), features)
    analysis = analysis or AnalysisContext(g)
    return Evaluation(
        accuracy=accuracy(fwd.x, np.asarray(labels), np.asarray(node_set, dtype=np.int64)),
        hf_fraction_per_class=analysis.hf_fraction_per_class(fwd.x),
        nonuniformity_sweep=nonuniformity_sweep(fwd.x, model_tag=model_tag),
        x=fwd.x,
    )


# ----------------------------- підбір η -----------------------------

def _val_score(args) -> float:
    g, features, labels, split, cfg = args
    _, metrics = train(g, features, labels, split, cfg)
    return metrics.best_val_acc


def tune_eta(
    g: Graph,
    features,
    labels: Sequence[int],
    split: Split,
    cfg: TrainConfig,
    grid: Sequence[float] = Config.ETA_GRID,
    jobs: int = 1,
) -> Tuple[float, Dict[float, float]]:
    """Найкраща валідаційна точність по сітці η; нічия на користь меншого η."""
    etas = sorted(float(e) for e in grid)
    tasks = [(g, features, labels, split, replace(cfg, eta=eta)) for eta in etas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_val_score, tasks))
    else:
        values = [_val_score(t) for t in tasks]
    scores = dict(zip(etas, values))
    best_eta = etas[0]
    for eta in etas[1:]:
        if scores[eta] > scores[best_eta]:
            best_eta = eta
    logger.info("eta grid %s -> %s", scores, best_eta)
    return best_eta, scores


def default_split(dataset: Dataset, seed: int) -> Split:
    """Стандартний протокол 20/500/1000 для Cora; для малих графів 5 на клас, 40 на валідацію, решта: тест."""
    if dataset.name == "cora":
        return make_split(dataset.labels, Config.PER_CLASS, Config.VAL_SIZE, Config.TEST_SIZE, seed)
    return make_split(dataset.labels, Config.SBM_PER_CLASS, Config.SBM_VAL_SIZE, None, seed)
