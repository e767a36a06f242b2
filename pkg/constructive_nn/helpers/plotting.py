from pathlib import Path
from typing import Dict, Union
import pandas as pd
import plotly.express as px
from plotly.graph_objects import Figure


def error_curve_figure(histories: Dict[int, pd.DataFrame]) -> Figure:
    """Mean error against epoch, one pair of lines per phase."""
    df = pd.concat(
        [
            (
                hist
                .melt(
                    id_vars=["epoch"],
                    value_vars=["train_error", "valid_error"],
                    var_name="split",
                    value_name="error"
                )
                .assign(
                    hidden_units=h,
                    split=lambda d: d["split"].str.replace("_error", "")
                )
            )
            for h, hist in sorted(histories.items())
        ],
        ignore_index=True
    )
    fig = px.line(
        df,
        x="epoch",
        y="error",
        color="split",
        facet_col="hidden_units",
        labels=dict(
            epoch="Epoch",
            error="Mean error",
            split="Split",
            hidden_units="Hidden units"
        ),
        title="Error vs Epochs"
    )
    return fig


def growth_figure(trace_df: pd.DataFrame) -> Figure:
    """Efficiency of every split as hidden units are added."""
    df = (
        trace_df
        .rename(columns=dict(
            train_efficiency="train",
            valid_efficiency="valid",
            test_efficiency="test",
            overall_efficiency="overall"
        ))
        .melt(
            id_vars=["hidden_units"],
            value_vars=["train", "valid", "test", "overall"],
            var_name="split",
            value_name="efficiency"
        )
    )
    fig = px.line(
        df,
        x="hidden_units",
        y="efficiency",
        color="split",
        markers=True,
        labels=dict(
            hidden_units="Number of hidden units",
            efficiency="Efficiency (%)",
            split="Split"
        ),
        title="Hidden units addition"
    )
    selected = trace_df.loc[trace_df["selected"].astype(bool), "hidden_units"]
    if selected.shape[0] > 0:
        fig.add_vline(x=int(selected.iloc[0]), line_dash="dash", line_color="grey")
    return fig


def write_figure(fig: Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    fig.write_html(path, include_plotlyjs="cdn")
    return path
