from dataclasses import dataclass
from typing import Sequence
import numpy as np
from constructive_nn.errors import InputError


@dataclass(frozen=True, eq=False)
class PatternSet:
    """
    Encoded patterns: inputs in [0, 1], targets in {0, 1}.

    A single output column holds a 0/1 class label; several output
    columns hold one-hot rows.
    """
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        targets = np.array(self.targets, dtype=np.float64)
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        if targets.ndim == 1:
            targets = targets[:, None]

        if inputs.ndim != 2 or targets.ndim != 2:
            raise InputError("Inputs and targets must be matrices")
        if inputs.shape[0] < 1:
            raise InputError("A pattern set needs at least one pattern")
        if inputs.shape[0] != targets.shape[0]:
            raise InputError(
                f"{inputs.shape[0]} input rows but {targets.shape[0]} target rows"
            )
        if not np.all(np.isfinite(inputs)):
            raise InputError("Inputs must be finite")
        if np.any(inputs < 0) or np.any(inputs > 1):
            raise InputError("Inputs must be normalized to [0, 1]")
        if not np.all(np.isin(targets, [0.0, 1.0])):
            raise InputError("Targets must be 0 or 1")
        if targets.shape[1] > 1 and not np.all(targets.sum(axis=1) == 1):
            raise InputError("One-hot target rows must sum to 1")

        inputs.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]

    @property
    def output_dim(self) -> int:
        return self.targets.shape[1]

    def classes(self) -> np.ndarray:
        """Class index of every pattern."""
        if self.output_dim == 1:
            return self.targets[:, 0].astype(int)
        return np.argmax(self.targets, axis=1)

    def subset(self, indices: Sequence[int]) -> "PatternSet":
        indices = np.asarray(indices, dtype=int)
        return PatternSet(
            inputs=self.inputs[indices],
            targets=self.targets[indices]
        )

    def same_patterns(self, other: "PatternSet") -> bool:
        return (
            np.array_equal(self.inputs, other.inputs)
            and np.array_equal(self.targets, other.targets)
        )
