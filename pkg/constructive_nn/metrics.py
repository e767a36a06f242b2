"""
Classification decisions and efficiency figures.

Efficiency is the percentage of correctly classified patterns in a
split. Overall efficiency pools the three splits: total correct over
total patterns.
"""

from dataclasses import dataclass, asdict
from typing import Sequence
import numpy as np
import pandas as pd
from constructive_nn.data.patterns import PatternSet
from constructive_nn.errors import InputError
from constructive_nn.network import Network, forward_batch
from constructive_nn.training import mean_squared_error

ENCODINGS = ["single_unit", "one_per_class"]


@dataclass
class EvalResult:
    split_name: str
    classified_count: int
    total: int
    efficiency_percent: float
    ms_error: float

    def __post_init__(self):
        assert 0 <= self.classified_count <= self.total, (self.classified_count, self.total)

    def to_dict(self) -> dict:
        return asdict(self)


def classify_batch(outputs: np.ndarray, encoding: str) -> np.ndarray:
    """Class index for every row of a [N x output_dim] matrix."""
    outputs = np.asarray(outputs, dtype=np.float64)
    if encoding == "single_unit":
        return (outputs[:, 0] >= 0.5).astype(int)
    elif encoding == "one_per_class":
        # argmax returns the first maximum, so ties go to the lowest index
        return np.argmax(outputs, axis=1)
    raise InputError(f"Unknown target encoding '{encoding}'")


def classify(output, encoding: str) -> int:
    """Threshold a single output at 0.5, or take the argmax of several."""
    output = np.asarray(output, dtype=np.float64)
    return int(classify_batch(output[None, :], encoding)[0])


def efficiency(classified: int, total: int) -> float:
    if total <= 0:
        raise InputError("Efficiency is undefined for an empty split")
    return 100.0 * classified / total


def evaluate(net: Network, split: PatternSet, encoding: str, split_name: str = "") -> EvalResult:
    """Count correct classifications and measure the error on one split."""
    if split is None or len(split) == 0:
        raise InputError("Cannot evaluate an empty split")
    predicted = classify_batch(forward_batch(net, split.inputs).output, encoding)
    classified = int(np.sum(predicted == split.classes()))

    return EvalResult(
        split_name=split_name,
        classified_count=classified,
        total=len(split),
        efficiency_percent=efficiency(classified, len(split)),
        ms_error=mean_squared_error(net, split)
    )


def overall_efficiency(results: Sequence[EvalResult]) -> float:
    """Pooled accuracy over the given splits."""
    total = sum(res.total for res in results)
    if total <= 0:
        raise InputError("Overall efficiency is undefined for zero patterns")
    return 100.0 * sum(res.classified_count for res in results) / total


def confusion_matrix(net: Network, split: PatternSet, encoding: str) -> pd.DataFrame:
    """Counts of actual (rows) against predicted (columns) classes."""
    predicted = classify_batch(forward_batch(net, split.inputs).output, encoding)
    n_classes = max(2, split.output_dim)
    return (
        pd.crosstab(
            pd.Series(split.classes(), name="actual"),
            pd.Series(predicted, name="predicted")
        )
        .reindex(index=range(n_classes), columns=range(n_classes), fill_value=0)
    )
