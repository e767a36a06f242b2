import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner
from constructive_nn import __version__
from constructive_nn.data import get_schema, load_dataset
from constructive_nn.helpers.hash import hash_file
from constructive_nn.helpers.io import read_json
from constructive_nn.runner.cli import cli
from constructive_nn.runner.reports import read_histories
from tests.conftest import write_config
from tests.test_reports import summary_rows

VACUOUS = ["--stop.max_validation_error", "1.0", "--stop.min_efficiency", "0"]
UNREACHABLE = [
    "--stop.max_validation_error", "0",
    "--stop.min_efficiency", "100",
    "--stop.max_hidden_units", "4"
]

OR_SCHEMA = """\
name=or
input_attributes=2
output_units=1
output_classes=2
target_encoding=single_unit
label_map=0:0,1:1
train_n=4
valid_n=4
test_n=4
"""

# h = sigmoid(10 x1 + 10 x2 - 5), y = sigmoid(10 h - 5)
OR_MODEL = "constructive-nn-model 1\n2 1 1\n10.0 10.0\n-5.0\n10.0\n-5.0\n"


def invoke(*args):
    return CliRunner().invoke(cli, [str(arg) for arg in args])


def grow_args(cancer_file, out_dir, *extra):
    return [
        "grow",
        "--data.name", "cancer",
        "--data.path", cancer_file,
        "--train.epochs_per_phase", "2",
        "--out.dir", out_dir,
        *extra
    ]


@pytest.fixture
def or_config(tmp_path):
    (tmp_path / "or.schema").write_text(OR_SCHEMA)
    (tmp_path / "or.data").write_text("0,0,0\n0,1,1\n1,0,1\n1,1,1\n" * 3)
    return write_config(
        tmp_path / "or.conf",
        data__schema="or.schema",
        data__path="or.data",
        out__dir="or_run"
    )


class TestGrow:

    def test_criteria_met(self, tmp_path, cancer_file):
        out_dir = tmp_path / "run"
        result = invoke(*grow_args(cancer_file, out_dir, *VACUOUS))
        assert result.exit_code == 0, result.output
        assert "Termination: criteria_met" in result.output

        for name in ["model.txt", "trace.csv", "errors_h1.csv", "summary.txt",
                     "config.txt", "run.json", "run.log", "checkpoints/model_h1.txt"]:
            assert (out_dir / name).is_file(), name
        assert pd.read_csv(out_dir / "trace.csv").shape[0] == 1

        run_info = read_json(out_dir / "run.json")
        assert run_info["termination"] == "criteria_met"
        assert run_info["version"] == __version__
        assert run_info["seeds"] == dict(weights=0, shuffle=0)
        assert run_info["split"]["train_n"] == 350
        assert run_info["sha256"]["model.txt"] == hash_file(out_dir / "model.txt")
        assert "Termination: criteria_met" in (out_dir / "run.log").read_text()

    def test_budget_exhausted(self, tmp_path, cancer_file):
        out_dir = tmp_path / "run"
        result = invoke(*grow_args(cancer_file, out_dir, *UNREACHABLE))
        assert result.exit_code == 2, result.output

        rows = summary_rows((out_dir / "summary.txt").read_text())
        assert [int(tokens[0]) for _, tokens in rows] == [1, 2, 3, 4]
        assert [int(tokens[1]) for _, tokens in rows] == [2, 4, 6, 8]
        assert sum(selected for selected, _ in rows) == 1
        assert all(len(tokens) == 11 for _, tokens in rows)
        for h in range(1, 5):
            assert (out_dir / "checkpoints" / f"model_h{h}.txt").is_file()

    def test_rerun_replaces_earlier_artifacts(self, tmp_path, cancer_file):
        out_dir = tmp_path / "run"
        result = invoke(*grow_args(cancer_file, out_dir, *UNREACHABLE, "--out.html", "true"))
        assert result.exit_code == 2, result.output
        assert (out_dir / "growth.html").is_file()
        (out_dir / "eval_test.csv").write_text("kept\n")

        result = invoke(*grow_args(cancer_file, out_dir, *VACUOUS))
        assert result.exit_code == 0, result.output
        assert sorted(read_histories(out_dir)) == [1]
        assert [fp.name for fp in (out_dir / "checkpoints").iterdir()] == ["model_h1.txt"]
        assert sorted(fp.name for fp in out_dir.glob("errors_h*.csv")) == ["errors_h1.csv"]
        assert not (out_dir / "growth.html").exists()
        assert pd.read_csv(out_dir / "trace.csv").shape[0] == 1
        assert read_json(out_dir / "run.json")["termination"] == "criteria_met"
        assert (out_dir / "eval_test.csv").read_text() == "kept\n"

    def test_model_is_selected_checkpoint(self, tmp_path, cancer_file):
        out_dir = tmp_path / "run"
        invoke(*grow_args(cancer_file, out_dir, *UNREACHABLE))
        trace = pd.read_csv(out_dir / "trace.csv")
        best = int(trace.loc[trace["selected"], "hidden_units"].iloc[0])
        assert (
            (out_dir / "model.txt").read_bytes()
            == (out_dir / "checkpoints" / f"model_h{best}.txt").read_bytes()
        )

    def test_deterministic(self, tmp_path, cancer_file):
        for run in ["a", "b"]:
            result = invoke(*grow_args(
                cancer_file, tmp_path / run, *UNREACHABLE,
                "--stop.max_hidden_units", "3",
                "--data.order", "seeded_shuffle",
                "--train.seed", "4",
                "--net.seed", "2"
            ))
            assert result.exit_code == 2, result.output
        for name in ["trace.csv", "model.txt", "errors_h3.csv", "checkpoints/model_h2.txt"]:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name

    def test_seed_changes_weights(self, tmp_path, cancer_file):
        for seed in ["1", "2"]:
            invoke(*grow_args(cancer_file, tmp_path / seed, *VACUOUS, "--net.seed", seed))
        assert (tmp_path / "1" / "model.txt").read_bytes() != (tmp_path / "2" / "model.txt").read_bytes()

    def test_missing_data_file(self, tmp_path):
        missing = tmp_path / "nowhere" / "cancer.data"
        result = invoke(*grow_args(missing, tmp_path / "run"))
        assert result.exit_code == 1
        assert str(missing) in result.output
        assert not (tmp_path / "run").exists()

    def test_bad_value(self, tmp_path, cancer_file):
        result = invoke(*grow_args(cancer_file, tmp_path / "run", "--train.momentum", "1.5"))
        assert result.exit_code == 1
        assert "train.momentum" in result.output

    def test_unknown_option(self, tmp_path, cancer_file):
        result = invoke(*grow_args(cancer_file, tmp_path / "run", "--train.speed", "2"))
        assert result.exit_code == 1

    def test_config_file(self, tmp_path, cancer_file):
        fp = write_config(
            tmp_path / "cancer.conf",
            data__name="cancer",
            data__path="cancer.data",
            train__epochs_per_phase=2,
            stop__max_validation_error=1.0,
            stop__min_efficiency=0,
            out__dir="from_file"
        )
        result = invoke("grow", fp)
        assert result.exit_code == 0, result.output
        assert (tmp_path / "from_file" / "model.txt").is_file()


def test_train_fixed_topology(tmp_path, cancer_file):
    out_dir = tmp_path / "fixed"
    result = invoke(
        "train",
        "--data.name", "cancer",
        "--data.path", cancer_file,
        "--net.hidden_units", "3",
        "--train.epochs_per_phase", "2",
        "--out.dir", out_dir
    )
    assert result.exit_code == 0, result.output
    trace = pd.read_csv(out_dir / "trace.csv")
    assert trace["hidden_units"].tolist() == [3]
    assert read_json(out_dir / "run.json")["termination"] == "fixed_topology"


class TestEval:

    def test_or_model(self, tmp_path, or_config):
        model = tmp_path / "or_model.txt"
        model.write_text(OR_MODEL)
        result = invoke("eval", model, or_config, "--split", "train")
        assert result.exit_code == 0, result.output
        assert "4/4 classified" in result.output
        assert "100.00000%" in result.output

        record = pd.read_csv(tmp_path / "eval_train.csv")
        assert record.shape[0] == 1
        assert record.loc[0, "classified_count"] == 4
        assert record.loc[0, "efficiency_percent"] == 100.0

    def test_zero_model_predicts_class_one(self, tmp_path, cancer_file):
        model = tmp_path / "zero.txt"
        model.write_text("constructive-nn-model 1\n9 1 1\n" + " ".join(["0"] * 9) + "\n0\n0\n0\n")
        output = tmp_path / "zero_eval.csv"
        result = invoke(
            "eval", model,
            "--data.name", "cancer",
            "--data.path", cancer_file,
            "--split", "train",
            "--output", output
        )
        assert result.exit_code == 0, result.output

        train = load_dataset(cancer_file, get_schema("cancer")).train
        n_class_one = int(np.sum(train.targets[:, 0] == 1))
        record = pd.read_csv(output)
        assert record.loc[0, "classified_count"] == n_class_one
        assert record.loc[0, "total"] == 350

    def test_wrong_dimensions(self, tmp_path, cancer_file):
        model = tmp_path / "or_model.txt"
        model.write_text(OR_MODEL)
        result = invoke("eval", model, "--data.name", "cancer", "--data.path", cancer_file)
        assert result.exit_code == 1
        assert "2-1-1" in result.output

    def test_corrupt_model(self, tmp_path, or_config):
        model = tmp_path / "bad.txt"
        model.write_text("constructive-nn-model 1\n2 1 1\n10.0\n")
        result = invoke("eval", model, or_config)
        assert result.exit_code == 1


def test_report_rebuilds_summary(tmp_path, cancer_file):
    out_dir = tmp_path / "run"
    invoke(*grow_args(cancer_file, out_dir, *UNREACHABLE, "--stop.max_hidden_units", "2"))
    original = (out_dir / "summary.txt").read_text()
    (out_dir / "summary.txt").unlink()

    result = invoke("report", out_dir, "--html")
    assert result.exit_code == 0, result.output
    assert (out_dir / "summary.txt").read_text() == original
    assert (out_dir / "growth.html").is_file()
    assert (out_dir / "error_curve.html").is_file()


def test_report_without_trace(tmp_path):
    result = invoke("report", tmp_path)
    assert result.exit_code == 1


def test_sweep(tmp_path, cancer_file):
    fp = write_config(
        tmp_path / "cancer.conf",
        data__name="cancer",
        data__path="cancer.data",
        train__epochs_per_phase=2,
        stop__max_validation_error=1.0,
        stop__min_efficiency=0
    )
    out_root = tmp_path / "sweep"
    result = invoke("sweep", fp, "--seeds", "0-1", "--out-root", out_root)
    assert result.exit_code == 0, result.output

    df = pd.read_csv(out_root / "sweep.csv")
    assert df["run"].tolist() == ["cancer_seed0", "cancer_seed1"]
    assert df["net_seed"].tolist() == [0, 1]
    assert df["train_seed"].tolist() == [0, 1]
    assert (df["termination"] == "criteria_met").all()
    for run in df["run"]:
        assert (out_root / run / "model.txt").is_file()


def test_sweep_bad_seeds(tmp_path, cancer_file):
    fp = write_config(tmp_path / "cancer.conf", data__name="cancer", data__path="cancer.data")
    result = invoke("sweep", fp, "--seeds", "a-b", "--out-root", tmp_path / "sweep")
    assert result.exit_code == 1


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output
