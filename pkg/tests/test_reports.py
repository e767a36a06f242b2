import numpy as np
import pandas as pd
import pytest
from constructive_nn.growth import StoppingCriteria, run_mfnnca
from constructive_nn.network import NetworkConfig
from constructive_nn.runner.reports import (
    SUMMARY_COLUMNS,
    emit_reports,
    format_summary,
    read_histories,
    read_trace
)
from constructive_nn.training import TrainConfig
from tests.conftest import noisy_dataset


def grow(max_hidden_units, epochs=6, vacuous=False):
    if vacuous:
        stop = StoppingCriteria(max_validation_error=1.0, min_efficiency=0.0)
    else:
        stop = StoppingCriteria(max_validation_error=0.0, min_efficiency=100.0, max_hidden_units=max_hidden_units)
    return run_mfnnca(
        noisy_dataset(),
        NetworkConfig(input_dim=3, output_dim=1, seed=3),
        TrainConfig(epochs_per_phase=epochs, seed=4),
        stop
    )


def summary_rows(text):
    lines = text.splitlines()
    header_ix = next(ix for ix, line in enumerate(lines) if line.split()[:2] == ["HU", "EPOCH"])
    rows = []
    for line in lines[header_ix + 1:-1]:
        tokens = line.split()
        selected = tokens[0] == "*"
        rows.append((selected, tokens[1:] if selected else tokens))
    return rows


def test_single_phase(tmp_path):
    _, trace = grow(1, vacuous=True)
    written = emit_reports(trace, tmp_path)

    trace_lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert len(trace_lines) == 2
    errors = pd.read_csv(tmp_path / "errors_h1.csv")
    assert list(errors.columns) == ["epoch", "train_error", "valid_error"]
    assert errors.shape[0] == 6
    assert errors["epoch"].tolist() == list(range(1, 7))
    assert set(written) >= {"trace", "summary", "errors_h1"}


def test_overall_recomputable(tmp_path):
    _, trace = grow(3)
    emit_reports(trace, tmp_path)
    df = read_trace(tmp_path)
    assert df.shape[0] == 3
    classified = df["train_classified"] + df["valid_classified"] + df["test_classified"]
    total = df["train_total"] + df["valid_total"] + df["test_total"]
    np.testing.assert_allclose(df["overall_efficiency"], 100.0 * classified / total, rtol=1e-12)
    assert df["selected"].sum() == 1


def test_summary_matches_trace(tmp_path):
    _, trace = grow(3)
    emit_reports(trace, tmp_path, title="noisy")
    df = read_trace(tmp_path)
    text = (tmp_path / "summary.txt").read_text()
    assert text.startswith("Dataset: noisy\nTermination: budget_exhausted\n")

    rows = summary_rows(text)
    assert len(rows) == df.shape[0]
    for (selected, tokens), (_, rec) in zip(rows, df.iterrows()):
        assert len(tokens) == len(SUMMARY_COLUMNS) == 11
        assert selected == bool(rec["selected"])
        for token, (_, cname, fmt) in zip(tokens, SUMMARY_COLUMNS):
            if fmt == "{:d}":
                assert int(token) == rec[cname]
            else:
                decimals = int(fmt[3])
                assert float(token) == pytest.approx(round(rec[cname], decimals), abs=10 ** -decimals)


def test_format_summary_from_rows():
    df = pd.DataFrame([
        dict(hidden_units=1, cumulative_epochs=500, train_classified=338, train_efficiency=96.571428,
             train_ms_error=0.02, valid_classified=169, valid_efficiency=96.571428, valid_ms_error=0.021,
             test_classified=172, test_efficiency=98.850574, overall_efficiency=97.138769, selected=False),
        dict(hidden_units=2, cumulative_epochs=1000, train_classified=346, train_efficiency=98.857142,
             train_ms_error=0.01, valid_classified=169, valid_efficiency=96.571428, valid_ms_error=0.022,
             test_classified=168, test_efficiency=96.551724, overall_efficiency=97.711016, selected=True),
    ])
    rows = summary_rows(format_summary(df))
    assert rows[0] == (False, ["1", "500", "338", "96.57", "0.0200", "169", "96.57", "0.0210",
                               "172", "98.85", "97.13877"])
    assert rows[1][0] is True
    assert rows[1][1][-1] == "97.71102"


def test_histories_round_trip(tmp_path):
    _, trace = grow(2)
    emit_reports(trace, tmp_path)
    histories = read_histories(tmp_path)
    assert sorted(histories) == [1, 2]
    for h, history in zip([1, 2], trace.histories):
        np.testing.assert_allclose(histories[h]["train_error"], history.train_error, rtol=1e-12)


def test_html_figures(tmp_path):
    _, trace = grow(2)
    written = emit_reports(trace, tmp_path, html=True)
    assert (tmp_path / "error_curve.html").is_file()
    assert (tmp_path / "growth.html").is_file()
    assert written["growth"] == tmp_path / "growth.html"


def test_read_trace_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_trace(tmp_path)
