import csv
import json

import click
import pytest

import modules.dist_signal.commands as bounds_commands
import modules.gnn.services as gnn_services
from config import Config
from modules.cli.models import EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, Command
from modules.cli.services import execute, main, parse_args
from modules.gnn.datasets import resolve_dataset
from modules.gnn.models import TrainConfig
from modules.gnn.services import AnalysisContext, default_split
from modules.gnn.services import train as train_model
from modules.graph_core.io import read_graph_file, read_labels_file
from modules.spectral.services import gft


# ----------------------------- розбір -----------------------------

def test_parse_bounds_flags():
    cmd = parse_args(["bounds", "--trials", "5", "--n", "4"])
    assert cmd.subcommand == "bounds"
    assert cmd.params["trials"] == 5
    assert cmd.params["n"] == 4
    assert cmd.params["m"] == 3
    assert cmd.out == "bounds.json"


def test_parse_variant_is_case_insensitive():
    cmd = parse_args(["train", "--variant", "R", "--eta", "0.2"])
    assert cmd.params["variant"].lower() == "r"
    assert cmd.params["eta"] == 0.2
    assert cmd.params["dataset"] == "sbm"


def test_parse_unknown_subcommand():
    with pytest.raises(click.UsageError):
        parse_args(["frobnicate"])


def test_parse_file_dataset_needs_paths():
    with pytest.raises(click.UsageError, match="--graph"):
        parse_args(["train", "--dataset", "file", "--labels", "l.txt"])


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["bounds", "--bogus"],
        ["train", "--variant", "xyz"],
        ["train", "--eta", "-1"],
        ["train", "--dataset", "file"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "bounds" in capsys.readouterr().out
    assert main(["train", "--help"]) == EXIT_OK


# ----------------------------- виконання -----------------------------

def test_gen_sbm_writes_files(tmp_path):
    out = tmp_path / "sbm"
    assert main(["gen-sbm", "--n", "10", "--m", "2", "--seed", "3", "--out", str(out)]) == EXIT_OK
    g = read_graph_file(out / "graph.txt")
    labels = read_labels_file(out / "labels.txt", n=g.n)
    assert g.n == 20
    assert labels.tolist() == [0] * 10 + [1] * 10


def test_bounds_small_run(tmp_path):
    out = tmp_path / "bounds.json"
    code = main(["bounds", "--trials", "3", "--n", "4", "--m", "2", "--seed", "1", "--out", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["violations"] == []
    assert len(report["instances"]) == 3


def test_bounds_violation_exit_code(tmp_path, monkeypatch):
    class _Report:
        violation_count = 1
        c3_nodes_pass_rate = 1.0

        def as_dict(self):
            return {"violations": [{"instance": 0, "violations": ["tg1<=2*tg"]}]}

    monkeypatch.setattr(bounds_commands, "run_bounds_suite", lambda **kwargs: _Report())
    assert main(["bounds", "--trials", "1", "--out", str(tmp_path / "b.json")]) == EXIT_VIOLATION


def test_train_writes_metrics(tmp_path):
    out = tmp_path / "metrics.json"
    assert main(["train", "--epochs", "3", "--variant", "r", "--out", str(out)]) == EXIT_OK
    metrics = json.loads(out.read_text(encoding="utf-8"))
    assert metrics["config"]["variant"] == "r"
    assert len(metrics["per_epoch"]) == 3
    assert metrics["dataset"] == {"nodes": 200, "edges": metrics["dataset"]["edges"], "classes": 4, "features": 64}
    assert 0.0 <= metrics["test_acc"] <= 1.0


def test_train_zero_epochs_is_usage_error(tmp_path):
    assert main(["train", "--epochs", "0", "--out", str(tmp_path / "m.json")]) == EXIT_USAGE


def test_missing_dataset_files_exit_3(tmp_path):
    argv = [
        "train", "--dataset", "file",
        "--graph", str(tmp_path / "none.txt"),
        "--labels", str(tmp_path / "none_labels.txt"),
        "--epochs", "1",
        "--out", str(tmp_path / "m.json"),
    ]
    assert main(argv) == EXIT_IO


def test_missing_cora_exit_3(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "DATA_DIR", str(tmp_path))
    assert main(["train", "--dataset", "cora", "--epochs", "1", "--out", str(tmp_path / "m.json")]) == EXIT_IO


def test_bad_graph_file_exit_3(tmp_path):
    (tmp_path / "g.txt").write_text("3 1\n0 x\n", encoding="utf-8")
    (tmp_path / "l.txt").write_text("0\n1\n0\n", encoding="utf-8")
    argv = ["train", "--dataset", "file", "--graph", str(tmp_path / "g.txt"),
            "--labels", str(tmp_path / "l.txt"), "--epochs", "1", "--out", str(tmp_path / "m.json")]
    assert main(argv) == EXIT_IO


def test_unexpected_failure_exit_4(tmp_path, monkeypatch):
    def boom(**kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(bounds_commands, "run_bounds_suite", boom)
    assert main(["bounds", "--trials", "1", "--out", str(tmp_path / "b.json")]) == EXIT_FAILURE


def test_execute_unknown_command():
    assert execute(Command("frobnicate")) == EXIT_USAGE


def test_file_dataset_end_to_end(tmp_path):
    sbm_dir = tmp_path / "sbm"
    assert main(["gen-sbm", "--n", "30", "--m", "2", "--out", str(sbm_dir)]) == EXIT_OK
    out = tmp_path / "metrics.json"
    argv = ["train", "--dataset", "file", "--graph", str(sbm_dir / "graph.txt"),
            "--labels", str(sbm_dir / "labels.txt"), "--epochs", "2", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["dataset"]["nodes"] == 60


def test_analyze_writes_csv(tmp_path):
    out = tmp_path / "nonuniformity.csv"
    assert main(["analyze", "--variant", "r1", "--epochs", "2", "--out", str(out)]) == EXIT_OK
    with open(out, encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["epsilon", "kind", "count", "model_tag"]
    eps = len(Config.NONUNIFORMITY_EPS)
    assert len(rows) == 1 + 2 * 2 * eps
    assert {r[3] for r in rows[1:]} == {"gcn", "r1"}


def test_spectrum_without_model(tmp_path):
    out = tmp_path / "spectrum"
    assert main(["spectrum", "--epochs", "0", "--out", str(out)]) == EXIT_OK
    assert (out / "label.csv").exists() and (out / "random.csv").exists()
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert set(summary["hf_fraction"]) == {"label", "random"}
    assert summary["hf_fraction"]["label"] < summary["hf_fraction"]["random"]


def test_spectrum_with_model_columns(tmp_path):
    out = tmp_path / "spectrum"
    assert main(["spectrum", "--epochs", "2", "--variant", "r", "--out", str(out)]) == EXIT_OK
    for k in range(4):
        assert (out / f"r_class{k}.csv").exists()


def test_spectrum_columns_follow_final_epoch(tmp_path):
    out = tmp_path / "spectrum"
    argv = ["spectrum", "--epochs", "3", "--variant", "r", "--seed", "0", "--out", str(out)]
    assert main(argv) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))

    data = resolve_dataset("sbm", seed=0)
    split = default_split(data, 0)
    cfg = TrainConfig(variant="r", eta=Config.ETA, epochs=3, seed=0)
    _, metrics = train_model(data.graph, data.features, data.labels, split, cfg,
                             num_classes=data.num_classes)
    for k, value in enumerate(metrics.hf_fraction_per_class):
        assert summary["hf_fraction"][f"r_class{k}"] == pytest.approx(value, abs=1e-9)


def test_spectrum_raw_skips_normalization(tmp_path):
    out = tmp_path / "spectrum"
    assert main(["spectrum", "--epochs", "0", "--raw", "--out", str(out)]) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["normalized"] is False

    data = resolve_dataset("sbm", seed=0)
    analysis = AnalysisContext(data.graph)
    _, nodes = analysis.main
    expected = gft(analysis.spectrum, data.labels[nodes].astype(float))
    with open(out / "label.csv", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))[1:]
    assert [float(r[2]) for r in rows] == pytest.approx(expected.tolist(), abs=1e-9)


def test_spectrum_decomposes_once(tmp_path, monkeypatch):
    calls = []
    original = gnn_services.laplacian_spectrum

    def counting(graph, *args, **kwargs):
        calls.append(graph.n)
        return original(graph, *args, **kwargs)

    monkeypatch.setattr(gnn_services, "laplacian_spectrum", counting)
    argv = ["spectrum", "--epochs", "2", "--variant", "r", "--out", str(tmp_path / "s")]
    assert main(argv) == EXIT_OK
    assert len(calls) == 1
