import numpy as np
import pytest
from hypothesis import given, strategies as st

import modules.gnn.services as gnn_services
from errors import DatasetFormatError, DimensionMismatchError, SplitError, TrainingDivergedError
from extensions import make_rng
from modules.gnn.datasets import (
    dataset_summary,
    folded_identity_features,
    load_cora,
    load_file_dataset,
    resolve_dataset,
    sbm_dataset,
)
from modules.gnn.models import VARIANTS, FeatureMatrix, GcnParams, Split, TrainConfig
from modules.gnn.optim import Adam
from modules.gnn.services import (
    AnalysisContext,
    accuracy,
    build_context,
    default_split,
    evaluate,
    gcn_forward,
    init_params,
    loss_and_grads,
    make_split,
    train,
    tune_eta,
)
from modules.graph_core.io import write_graph_file
from modules.graph_core.services import build_graph, normalized_adjacency
from modules.regularizer.models import ProbMatrix
from modules.regularizer.services import default_weight_diag, loss_components


def _toy():
    """6 вузлів, 3 класи, 5 ознак."""
    g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)])
    raw = np.random.default_rng(1).random((6, 5))
    labels = np.array([0, 1, 2, 0, 1, 2])
    split = Split(train=[0, 1, 2], val=[3, 4], test=[5], seed=0)
    return g, FeatureMatrix.normalized(raw), labels, split


def _cora_files(tmp_path, content, cites):
    c = tmp_path / "cora.content"
    e = tmp_path / "cora.cites"
    c.write_text(content, encoding="utf-8")
    e.write_text(cites, encoding="utf-8")
    return c, e


# ----------------------------- Cora -----------------------------

def test_load_cora_small(tmp_path, caplog):
    content = "p1 1 0 1 Theory\np2 0 1 0 AI\np3 0 0 0 AI\n"
    cites = "p1 p2\np2 p1\np3 p3\np2 p3\n"
    c, e = _cora_files(tmp_path, content, cites)
    with caplog.at_level("WARNING"):
        g, features, labels = load_cora(c, e, feature_dim=3)
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))
    # класи відсортовано за назвою: AI=0, Theory=1
    assert labels.tolist() == [1, 0, 0]
    assert np.allclose(features.values[0], [0.5, 0.0, 0.5])
    assert np.array_equal(features.values[2], [0.0, 0.0, 0.0])
    assert "self-citations" in caplog.text


def test_load_cora_wrong_feature_count(tmp_path):
    good = "p1 " + " ".join(["0"] * 1433) + " AI\n"
    bad = "p2 " + " ".join(["0"] * 1432) + " AI\n"
    c, e = _cora_files(tmp_path, good + bad, "p1 p2\n")
    with pytest.raises(DatasetFormatError, match=r"cora.content:2: expected 1433 features, found 1432"):
        load_cora(c, e)


def test_load_cora_dangling_citation(tmp_path):
    c, e = _cora_files(tmp_path, "p1 1 AI\np2 1 AI\n", "p1 p2\np1 p9\n")
    with pytest.raises(DatasetFormatError, match=r"cora.cites:2: dangling citation id 'p9'"):
        load_cora(c, e, feature_dim=1)


def test_load_cora_duplicate_id(tmp_path):
    c, e = _cora_files(tmp_path, "p1 1 AI\np1 1 AI\n", "")
    with pytest.raises(DatasetFormatError, match="duplicate paper id"):
        load_cora(c, e, feature_dim=1)


def test_load_cora_empty_cites_warns(tmp_path, caplog):
    c, e = _cora_files(tmp_path, "p1 1 AI\np2 1 ML\n", "")
    with caplog.at_level("WARNING"):
        g, _, _ = load_cora(c, e, feature_dim=None)
    assert g.num_edges == 0
    assert "no citations" in caplog.text


# ----------------------------- файлові датасети та SBM -----------------------------

def test_folded_identity_features():
    f = folded_identity_features(5, 3)
    assert f.values.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_feature_matrix_requires_normalized_rows():
    with pytest.raises(ValueError, match="not normalized"):
        FeatureMatrix([[1.0, 1.0]])
    assert FeatureMatrix.normalized([[1.0, 3.0], [0.0, 0.0]]).values.tolist() == [[0.25, 0.75], [0.0, 0.0]]


def test_load_file_dataset(tmp_path, c4):
    write_graph_file(tmp_path / "ring.txt", c4)
    (tmp_path / "labels.txt").write_text("0\n0\n1\n1\n", encoding="utf-8")
    (tmp_path / "feats.txt").write_text("1 1\n2 0\n0 3\n1 3\n", encoding="utf-8")
    data = load_file_dataset(tmp_path / "ring.txt", tmp_path / "labels.txt", tmp_path / "feats.txt")
    assert data.name == "ring"
    assert data.num_classes == 2
    assert np.allclose(data.features.values[3], [0.25, 0.75])
    assert dataset_summary(data.graph, data.features, data.labels) == {
        "nodes": 4, "edges": 4, "classes": 2, "features": 2,
    }


def test_load_file_dataset_ragged_features(tmp_path, c4):
    write_graph_file(tmp_path / "ring.txt", c4)
    (tmp_path / "labels.txt").write_text("0\n0\n1\n1\n", encoding="utf-8")
    (tmp_path / "feats.txt").write_text("1 1\n2\n0 3\n1 3\n", encoding="utf-8")
    with pytest.raises(DatasetFormatError, match=r"feats.txt:2"):
        load_file_dataset(tmp_path / "ring.txt", tmp_path / "labels.txt", tmp_path / "feats.txt")


def test_resolve_dataset_file_needs_paths():
    with pytest.raises(ValueError, match="--graph and --labels"):
        resolve_dataset("file")


def test_sbm_dataset_defaults():
    data = sbm_dataset(seed=2)
    assert data.graph.n == 200
    assert data.num_classes == 4
    assert data.features.dim == 64
    assert data.name == "sbm"


# ----------------------------- спліти -----------------------------

def test_make_split_standard_protocol():
    labels = np.repeat(np.arange(7), 30)
    split = make_split(labels, per_class=20, val_size=30, test_size=40, seed=3)
    assert split.train.size == 140
    assert np.array_equal(np.bincount(labels[split.train]), [20] * 7)
    assert split.val.size == 30 and split.test.size == 40
    assert not set(split.train) & set(split.val)
    assert not set(split.val) & set(split.test)


def test_make_split_is_deterministic():
    labels = np.repeat(np.arange(3), 10)
    a = make_split(labels, 2, 5, None, seed=7)
    b = make_split(labels, 2, 5, None, seed=7)
    assert np.array_equal(a.train, b.train) and np.array_equal(a.test, b.test)
    assert a.train.size + a.val.size + a.test.size == 30


def test_make_split_errors():
    labels = np.array([0, 0, 1])
    with pytest.raises(SplitError, match="class 1 has 1 nodes"):
        make_split(labels, per_class=2, val_size=0, test_size=0)
    with pytest.raises(SplitError, match="insufficient nodes"):
        make_split(labels, per_class=1, val_size=1, test_size=1)


def test_split_rejects_overlap():
    with pytest.raises(SplitError, match="overlap"):
        Split(train=[0, 1], val=[1], test=[2], seed=0)


def test_default_split_for_small_graphs():
    data = sbm_dataset(block_sizes=(30, 30), p_in=0.3, p_out=0.05, seed=0)
    split = default_split(data, seed=0)
    assert split.train.size == 10
    assert split.val.size == 40
    assert split.test.size == 10


# ----------------------------- прямий прохід -----------------------------

def test_zero_weights_give_uniform_output():
    g, f, labels, _ = _toy()
    params = GcnParams(np.zeros((5, 4)), np.zeros((4, 3)))
    out = gcn_forward(params, normalized_adjacency(g), f)
    assert np.allclose(out.x.values, 1.0 / 3.0)


def test_single_node_forward():
    g = build_graph(1, [])
    out = gcn_forward(GcnParams(np.ones((1, 1)), np.ones((1, 1))), normalized_adjacency(g), [[1.0]])
    assert out.o.tolist() == [[1.0]]
    assert out.x.values.tolist() == [[1.0]]


def test_forward_dimension_mismatch():
    g, f, _, _ = _toy()
    with pytest.raises(DimensionMismatchError):
        gcn_forward(GcnParams(np.zeros((4, 2)), np.zeros((2, 3))), normalized_adjacency(g), f)


@given(st.permutations(range(6)))
def test_forward_is_permutation_equivariant(perm):
    g, f, _, _ = _toy()
    perm = np.asarray(perm)
    params = init_params(5, 4, 3, make_rng(0))
    # вузол v переходить у perm[v]
    gp = build_graph(6, [(int(perm[u]), int(perm[v])) for u, v in g.edges])
    fp = np.zeros_like(f.values)
    fp[perm] = f.values
    o = gcn_forward(params, normalized_adjacency(g), f).o
    op = gcn_forward(params, normalized_adjacency(gp), fp).o
    assert np.allclose(op[perm], o, atol=1e-12)


# ----------------------------- градієнти -----------------------------

@pytest.mark.parametrize("variant", VARIANTS)
def test_full_gradient_matches_finite_differences(variant):
    g, f, labels, split = _toy()
    ctx = build_context(g, f, labels, split, num_classes=3)
    cfg = TrainConfig(variant=variant, eta=0.7, hidden=4, epochs=1, dropout=0.0)
    params = init_params(5, 4, 3, make_rng(11))
    _, (g_w1, g_w2), _ = loss_and_grads(params, ctx, cfg)

    h = 1e-6
    for grad, which in ((g_w1, "w1"), (g_w2, "w2")):
        numeric = np.zeros_like(grad)
        for idx in np.ndindex(*grad.shape):
            up, down = params.copy(), params.copy()
            getattr(up, which)[idx] += h
            getattr(down, which)[idx] -= h
            numeric[idx] = (
                loss_and_grads(up, ctx, cfg)[0].total - loss_and_grads(down, ctx, cfg)[0].total
            ) / (2 * h)
        assert np.allclose(grad, numeric, rtol=1e-4, atol=1e-7), which


def test_regularizer_values():
    g, f, labels, split = _toy()
    ctx = build_context(g, f, labels, split, num_classes=3)
    params = init_params(5, 4, 3, make_rng(2))
    d = default_weight_diag(g)

    parts, _, fwd = loss_and_grads(params, ctx, TrainConfig(variant="r", eta=0.5, epochs=1))
    l0 = loss_components(fwd.x, g, d)[2]
    # записується сирий слід, у втрату він входить поділеним на 2|E| = 14
    assert parts.regularizer == pytest.approx(l0, abs=1e-9)
    assert parts.total == pytest.approx(parts.cross_entropy + parts.weight_decay + 0.5 * l0 / 14)

    parts, _, fwd = loss_and_grads(params, ctx, TrainConfig(variant="lap", eta=0.5, epochs=1))
    one_hot = ProbMatrix.one_hot(np.argmax(fwd.x.values, axis=1), 3)
    assert parts.regularizer == pytest.approx(loss_components(one_hot, g, d)[2])
    # LAP лише логується
    assert parts.total == pytest.approx(parts.cross_entropy + parts.weight_decay)


def test_regularizer_scale_is_inverse_volume(c4):
    split = Split(train=[0], val=[1], test=[2], seed=0)
    ctx = build_context(c4, np.eye(4), [0, 1, 0, 1], split)
    assert ctx.reg_scale == pytest.approx(1 / 8)
    lonely = build_context(build_graph(2, []), np.eye(2), [0, 1], Split(train=[0], val=[1], test=[], seed=0))
    assert lonely.reg_scale == 1.0


def test_build_context_rejects_foreign_analysis(c4, p3):
    split = Split(train=[0], val=[1], test=[2], seed=0)
    with pytest.raises(DimensionMismatchError, match="different graph"):
        build_context(c4, np.eye(4), [0, 1, 0, 1], split, analysis=AnalysisContext(p3))


def test_adam_first_step_moves_by_learning_rate():
    p = np.array([1.0, -2.0])
    opt = Adam([p.shape], lr=0.1)
    opt.step([p], [np.array([3.0, -0.5])])
    assert np.allclose(p, [0.9, -1.9], atol=1e-6)


# ----------------------------- навчання -----------------------------

def test_train_config_validation():
    assert TrainConfig(variant="R").variant == "r"
    with pytest.raises(ValueError, match="unknown variant"):
        TrainConfig(variant="r9")
    with pytest.raises(ValueError, match="eta"):
        TrainConfig(eta=-1.0)


def test_zero_eta_matches_plain_gcn():
    g, f, labels, split = _toy()
    _, plain = train(g, f, labels, split, TrainConfig(variant="gcn", epochs=15, hidden=4, seed=3))
    _, reg = train(g, f, labels, split, TrainConfig(variant="r", eta=0.0, epochs=15, hidden=4, seed=3))
    assert [r.loss for r in plain.per_epoch] == [r.loss for r in reg.per_epoch]
    assert [r.acc_val for r in plain.per_epoch] == [r.acc_val for r in reg.per_epoch]
    assert plain.test_acc == reg.test_acc


def test_training_is_seeded():
    g, f, labels, split = _toy()
    cfg = TrainConfig(variant="r1", eta=0.3, epochs=10, hidden=4, seed=5, snapshot_epochs=(5,))
    p1, m1 = train(g, f, labels, split, cfg)
    p2, m2 = train(g, f, labels, split, cfg)
    assert np.array_equal(p1.w1, p2.w1)
    assert m1.as_dict() == m2.as_dict()
    assert list(m1.snapshots) == [5]
    assert len(m1.per_epoch) == 10
    assert 1 <= m1.best_epoch <= 10
    assert len(m1.hf_fraction_per_class) == 3
    assert {row[3] for row in m1.nonuniformity_sweep} == {"r1"}


def test_final_params_reproduce_final_analysis():
    g, f, labels, split = _toy()
    cfg = TrainConfig(variant="r", eta=0.5, epochs=12, hidden=4, seed=2)
    best, metrics = train(g, f, labels, split, cfg)
    assert metrics.final_params is not None
    assert "final_params" not in metrics.as_dict()
    final = evaluate(metrics.final_params, g, f, labels, split.test)
    assert final.hf_fraction_per_class == pytest.approx(metrics.hf_fraction_per_class, abs=1e-12)
    assert evaluate(best, g, f, labels, split.test).accuracy == metrics.test_acc


def test_shared_analysis_decomposes_once(monkeypatch):
    calls = []
    original = gnn_services.laplacian_spectrum

    def counting(graph, *args, **kwargs):
        calls.append(graph.n)
        return original(graph, *args, **kwargs)

    monkeypatch.setattr(gnn_services, "laplacian_spectrum", counting)
    g, f, labels, split = _toy()
    analysis = AnalysisContext(g)
    for variant in ("gcn", "r"):
        _, metrics = train(g, f, labels, split, TrainConfig(variant=variant, epochs=3, hidden=4),
                           analysis=analysis)
        evaluate(metrics.final_params, g, f, labels, split.test, analysis=analysis)
    assert calls == [6]


def test_training_divergence(monkeypatch):
    g, f, labels, split = _toy()
    monkeypatch.setattr(gnn_services, "_cross_entropy", lambda *args: float("nan"))
    with pytest.raises(TrainingDivergedError, match="epoch 1"):
        train(g, f, labels, split, TrainConfig(epochs=3, hidden=4))


def test_accuracy_tie_break_and_empty_set():
    x = ProbMatrix.uniform(4, 3)
    labels = np.array([0, 1, 0, 2])
    assert accuracy(x, labels, np.arange(4)) == 0.5
    assert accuracy(x, labels, np.array([], dtype=np.int64)) == 0.0


def test_evaluate_with_zero_weights():
    g, f, labels, _ = _toy()
    params = GcnParams(np.zeros((5, 4)), np.zeros((4, 3)))
    result = evaluate(params, g, f, labels, [0, 1, 2, 3, 4, 5], model_tag="gcn")
    assert result.accuracy == pytest.approx(2 / 6)
    near_uniform = [r for r in result.nonuniformity_sweep if r[1] == "near_uniform"]
    assert all(r[2] == 18 for r in near_uniform)


def test_tune_eta_prefers_smaller_eta_on_ties(monkeypatch):
    scores = {0.1: 0.5, 0.2: 0.7, 0.5: 0.7, 1.0: 0.6}
    monkeypatch.setattr(gnn_services, "_val_score", lambda args: scores[args[4].eta])
    g, f, labels, split = _toy()
    best, seen = tune_eta(g, f, labels, split, TrainConfig(variant="r", epochs=1))
    assert best == 0.2
    assert seen == scores


@pytest.mark.slow
@pytest.mark.parametrize("variant", VARIANTS)
def test_loss_decreases_on_sbm(variant):
    data = sbm_dataset(block_sizes=(30, 30, 30), p_in=0.3, p_out=0.02, seed=1)
    split = default_split(data, seed=1)
    cfg = TrainConfig(variant=variant, eta=0.5, epochs=60, dropout=0.0, seed=1)
    _, metrics = train(data.graph, data.features, data.labels, split, cfg)
    assert metrics.per_epoch[-1].loss < metrics.per_epoch[0].loss


@pytest.mark.slow
@pytest.mark.parametrize("variant", ["gcn", "r"])
def test_two_block_sbm_is_separated(variant):
    data = sbm_dataset(block_sizes=(100, 100), p_in=0.2, p_out=0.01, seed=0)
    split = default_split(data, seed=0)
    assert np.array_equal(np.bincount(data.labels[split.train]), [5, 5])
    _, metrics = train(data.graph, data.features, data.labels, split, TrainConfig(variant=variant, seed=0))
    assert metrics.test_acc > 0.9


@pytest.mark.slow
def test_regularized_model_matches_or_beats_gcn_on_four_blocks():
    gcn, reg = [], []
    for seed in range(10):
        data = sbm_dataset(seed=seed)
        split = default_split(data, seed)
        analysis = AnalysisContext(data.graph)
        for variant, out in (("gcn", gcn), ("r", reg)):
            _, metrics = train(data.graph, data.features, data.labels, split,
                               TrainConfig(variant=variant, seed=seed), analysis=analysis)
            out.append(metrics.test_acc)
    gcn, reg = np.array(gcn), np.array(reg)
    assert reg.mean() >= gcn.mean()
    assert int((reg >= gcn).sum()) >= 8
