"""
Report files written into a run directory.

    trace.csv        one row per phase (see PhaseRecord.row) plus 'selected'
    errors_h<k>.csv  epoch, train_error, valid_error for the phase with k units
    summary.txt      fixed-width table built only from trace.csv

summary.txt columns, left to right:

    (marker)   '*' on the selected phase
    HU         hidden units
    EPOCH      cumulative epochs at the end of the phase
    TRAIN_CLS  TRAIN_EFF  TRAIN_MSE
    VALID_CLS  VALID_EFF  VALID_MSE
    TEST_CLS   TEST_EFF
    OVERALL    overall efficiency

Efficiencies are printed with 2 decimals, errors with 4 and the overall
efficiency with 5.
"""

from pathlib import Path
import logging
import re
from typing import Dict, Optional, Union
import pandas as pd
from constructive_nn.growth import GrowthTrace
from constructive_nn.helpers.plotting import error_curve_figure, growth_figure, write_figure

logger = logging.getLogger(__name__)

TRACE_FILE = "trace.csv"
SUMMARY_FILE = "summary.txt"
ERRORS_PATTERN = re.compile(r"errors_h(\d+)\.csv")

SUMMARY_COLUMNS = [
    ("HU", "hidden_units", "{:d}"),
    ("EPOCH", "cumulative_epochs", "{:d}"),
    ("TRAIN_CLS", "train_classified", "{:d}"),
    ("TRAIN_EFF", "train_efficiency", "{:.2f}"),
    ("TRAIN_MSE", "train_ms_error", "{:.4f}"),
    ("VALID_CLS", "valid_classified", "{:d}"),
    ("VALID_EFF", "valid_efficiency", "{:.2f}"),
    ("VALID_MSE", "valid_ms_error", "{:.4f}"),
    ("TEST_CLS", "test_classified", "{:d}"),
    ("TEST_EFF", "test_efficiency", "{:.2f}"),
    ("OVERALL", "overall_efficiency", "{:.5f}"),
]


def errors_file(hidden_units: int) -> str:
    return f"errors_h{hidden_units}.csv"


def _write_csv(df: pd.DataFrame, path: Path):
    try:
        df.to_csv(path, index=False)
    except OSError as e:
        raise OSError(f"Could not write {path}: {e}")


def format_summary(
    trace_df: pd.DataFrame,
    title: Optional[str] = None,
    termination: Optional[str] = None
) -> str:
    """Fixed-width summary table of a trace.csv table."""
    table = pd.DataFrame({
        header: [
            fmt.format(int(val) if fmt == "{:d}" else float(val))
            for val in trace_df[cname]
        ]
        for header, cname, fmt in SUMMARY_COLUMNS
    })
    table.insert(
        0,
        "",
        ["*" if sel else " " for sel in trace_df["selected"].astype(bool)]
    )

    lines = []
    if title is not None:
        lines.append(f"Dataset: {title}")
    if termination is not None:
        lines.append(f"Termination: {termination}")
    lines.append(table.to_string(index=False))
    lines.append("* selected network (highest overall efficiency, fewest hidden units)")
    return "\n".join(lines) + "\n"


def write_summary(
    trace_df: pd.DataFrame,
    path: Union[str, Path],
    title: Optional[str] = None,
    termination: Optional[str] = None
) -> Path:
    path = Path(path)
    try:
        path.write_text(format_summary(trace_df, title=title, termination=termination))
    except OSError as e:
        raise OSError(f"Could not write {path}: {e}")
    return path


def write_figures(
    trace_df: pd.DataFrame,
    histories: Dict[int, pd.DataFrame],
    out_dir: Path
) -> Dict[str, Path]:
    return dict(
        error_curve=write_figure(error_curve_figure(histories), out_dir / "error_curve.html"),
        growth=write_figure(growth_figure(trace_df), out_dir / "growth.html")
    )


def emit_reports(
    trace: GrowthTrace,
    out_dir: Union[str, Path],
    title: Optional[str] = None,
    html: bool = False
) -> Dict[str, Path]:
    """Write trace.csv, one errors_h<k>.csv per phase and summary.txt."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = dict()

    trace_df = trace.to_dataframe()
    written["trace"] = out_dir / TRACE_FILE
    _write_csv(trace_df, written["trace"])

    histories = dict()
    for phase, history in zip(trace.phases, trace.histories):
        histories[phase.hidden_units] = history.to_dataframe()
        fp = out_dir / errors_file(phase.hidden_units)
        _write_csv(histories[phase.hidden_units], fp)
        written[fp.stem] = fp

    written["summary"] = write_summary(
        trace_df,
        out_dir / SUMMARY_FILE,
        title=title,
        termination=trace.termination
    )

    if html:
        written.update(write_figures(trace_df, histories, out_dir))

    logger.info(f"Wrote {len(written)} report files to {out_dir}")
    return written


def read_trace(run_dir: Union[str, Path]) -> pd.DataFrame:
    path = Path(run_dir) / TRACE_FILE
    if not path.is_file():
        raise FileNotFoundError(f"No {TRACE_FILE} in {run_dir}")
    return pd.read_csv(path)


def read_histories(run_dir: Union[str, Path]) -> Dict[int, pd.DataFrame]:
    histories = dict()
    for fp in Path(run_dir).glob("errors_h*.csv"):
        match = ERRORS_PATTERN.fullmatch(fp.name)
        if match is not None:
            histories[int(match.group(1))] = pd.read_csv(fp)
    return histories
