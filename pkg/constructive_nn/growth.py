"""
Constructive growth of the hidden layer.

Starting from a single hidden unit, the network is trained for a fixed
number of epochs, evaluated on all three splits, and either accepted or
grown by one unit whose weights are drawn fresh while every trained
weight is carried over. A run stops when the validation error and the
classification efficiency are both acceptable, or when the hidden-unit
budget is spent.
"""

from dataclasses import dataclass, field, replace
import logging
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
import pandas as pd
from constructive_nn.data.split import SplitDataset
from constructive_nn.errors import ConfigError, InputError
from constructive_nn.helpers.rng import Xorshift64Star
from constructive_nn.metrics import EvalResult, evaluate, overall_efficiency
from constructive_nn.network import (
    Network,
    NetworkConfig,
    NewUnitInit,
    add_hidden_unit,
    check_carry_over,
    init_network
)
from constructive_nn.training import ErrorHistory, TrainConfig, train_phase

logger = logging.getLogger(__name__)

CRITERIA_MET = "criteria_met"
BUDGET_EXHAUSTED = "budget_exhausted"
FIXED_TOPOLOGY = "fixed_topology"


@dataclass
class StoppingCriteria:
    """When a phase is good enough to stop growing."""
    # Acceptable mean error on the validation split
    max_validation_error: float = 0.02
    # Acceptable efficiency (percent) on the test split
    min_efficiency: float = 96.0
    # Growth never goes beyond this many hidden units
    max_hidden_units: int = 8
    # Epochs per phase; overrides the training config when set
    per_phase_epochs: Optional[int] = None
    # Check the efficiency on the validation split instead of the test split
    strict: bool = False

    def __post_init__(self):
        if np.isnan(self.max_validation_error) or self.max_validation_error < 0:
            raise ConfigError(
                f"max_validation_error must be >= 0, not {self.max_validation_error}"
            )
        if not 0 <= self.min_efficiency <= 100:
            raise ConfigError(f"min_efficiency must lie in [0, 100], not {self.min_efficiency}")
        if self.max_hidden_units < 1:
            raise ConfigError(f"max_hidden_units must be >= 1, not {self.max_hidden_units}")
        if self.per_phase_epochs is not None and self.per_phase_epochs < 1:
            raise ConfigError(f"per_phase_epochs must be >= 1, not {self.per_phase_epochs}")

    @property
    def efficiency_split(self) -> str:
        return "valid" if self.strict else "test"

    def satisfied_by(self, record: "PhaseRecord") -> bool:
        return (
            record.valid.ms_error <= self.max_validation_error
            and record.results[self.efficiency_split].efficiency_percent >= self.min_efficiency
        )


@dataclass
class PhaseRecord:
    """Outcome of one train-evaluate cycle at a fixed width."""
    hidden_units: int
    epochs_this_phase: int
    cumulative_epochs: int
    train: EvalResult
    valid: EvalResult
    test: EvalResult
    overall_efficiency: Optional[float] = None

    def __post_init__(self):
        if self.overall_efficiency is None:
            self.overall_efficiency = overall_efficiency([self.train, self.valid, self.test])

    @property
    def results(self) -> Dict[str, EvalResult]:
        return dict(train=self.train, valid=self.valid, test=self.test)

    def row(self) -> dict:
        """Flat representation, one trace.csv row."""
        row = dict(
            hidden_units=self.hidden_units,
            epochs_this_phase=self.epochs_this_phase,
            cumulative_epochs=self.cumulative_epochs
        )
        for name, res in self.results.items():
            row[f"{name}_classified"] = res.classified_count
            row[f"{name}_total"] = res.total
            row[f"{name}_efficiency"] = res.efficiency_percent
            row[f"{name}_ms_error"] = res.ms_error
        row["overall_efficiency"] = self.overall_efficiency
        return row


@dataclass
class GrowthTrace:
    phases: List[PhaseRecord] = field(default_factory=list)
    termination: Optional[str] = None
    best_phase_index: Optional[int] = None
    # Per-epoch errors of every phase
    histories: List[ErrorHistory] = field(default_factory=list)
    # Trained network at the end of every phase
    checkpoints: List[Network] = field(default_factory=list)

    @property
    def best_phase(self) -> PhaseRecord:
        return self.phases[self.best_phase_index]

    def to_dataframe(self) -> pd.DataFrame:
        df = pd.DataFrame([phase.row() for phase in self.phases])
        df["selected"] = [
            ix == self.best_phase_index
            for ix in range(len(self.phases))
        ]
        return df


def select_best_phase(trace_phases: Sequence[PhaseRecord]) -> int:
    """Index of the highest overall efficiency, ties to fewer hidden units."""
    if len(trace_phases) == 0:
        raise InputError("Cannot select a phase from an empty trace")
    return min(
        range(len(trace_phases)),
        key=lambda ix: (
            -trace_phases[ix].overall_efficiency,
            trace_phases[ix].hidden_units,
            ix
        )
    )


def encoding_for(output_dim: int) -> str:
    return "single_unit" if output_dim == 1 else "one_per_class"


def evaluate_phase(
    net: Network,
    data: SplitDataset,
    encoding: str,
    epochs_this_phase: int,
    cumulative_epochs: int
) -> PhaseRecord:
    results = {
        name: evaluate(net, patterns, encoding, split_name=name)
        for name, patterns in data.splits().items()
    }
    return PhaseRecord(
        hidden_units=net.hidden_units,
        epochs_this_phase=epochs_this_phase,
        cumulative_epochs=cumulative_epochs,
        **results
    )


def _log_phase(record: PhaseRecord):
    logger.info(
        f"h={record.hidden_units} epochs={record.cumulative_epochs} | "
        + " | ".join(
            f"{name} {res.classified_count}/{res.total} "
            f"({res.efficiency_percent:.2f}%, mse {res.ms_error:.4f})"
            for name, res in record.results.items()
        )
        + f" | overall {record.overall_efficiency:.5f}%"
    )


def run_mfnnca(
    data: SplitDataset,
    net_cfg: NetworkConfig,
    train_cfg: TrainConfig,
    stop: StoppingCriteria,
    encoding: Optional[str] = None,
    new_unit: Optional[NewUnitInit] = None
) -> Tuple[Network, GrowthTrace]:
    """
    Grow the hidden layer one unit at a time until the stopping criteria
    hold or max_hidden_units is reached.

    Weights (initial and added units) come from a generator seeded with
    net_cfg.seed, pattern order from one seeded with train_cfg.seed. The
    returned network is the checkpoint of the selected phase.
    """
    if data.input_dim != net_cfg.input_dim or data.output_dim != net_cfg.output_dim:
        raise ConfigError(
            f"Dataset shape {data.input_dim}->{data.output_dim} does not match "
            f"network config {net_cfg.input_dim}->{net_cfg.output_dim}"
        )
    if encoding is None:
        encoding = encoding_for(net_cfg.output_dim)
    if new_unit is None:
        new_unit = NewUnitInit.random(net_cfg.init_range)
    if net_cfg.hidden_units != 1:
        logger.warning(
            f"Growth starts from one hidden unit (ignoring hidden_units={net_cfg.hidden_units})"
        )
        net_cfg = replace(net_cfg, hidden_units=1)
    epochs = stop.per_phase_epochs or train_cfg.epochs_per_phase

    weight_rng = Xorshift64Star(net_cfg.seed)
    shuffle_rng = Xorshift64Star(train_cfg.seed)

    net = init_network(net_cfg, weight_rng)
    trace = GrowthTrace()
    cumulative = 0

    while True:
        net, history = train_phase(
            net, data.train, data.valid, train_cfg,
            rng=shuffle_rng,
            epochs=epochs
        )
        cumulative += epochs

        record = evaluate_phase(net, data, encoding, epochs, cumulative)
        trace.phases.append(record)
        trace.histories.append(history)
        trace.checkpoints.append(net)
        _log_phase(record)

        if stop.satisfied_by(record):
            trace.termination = CRITERIA_MET
            break
        if net.hidden_units >= stop.max_hidden_units:
            trace.termination = BUDGET_EXHAUSTED
            break

        grown = add_hidden_unit(net, new_unit, weight_rng)
        assert check_carry_over(net, grown), "Trained weights were not carried over"
        net = grown

    trace.best_phase_index = select_best_phase(trace.phases)
    logger.info(
        f"Stopped ({trace.termination}) after {len(trace.phases)} phases; "
        f"selected h={trace.best_phase.hidden_units} "
        f"(overall {trace.best_phase.overall_efficiency:.5f}%)"
    )

    return trace.checkpoints[trace.best_phase_index], trace


def run_fixed(
    data: SplitDataset,
    net_cfg: NetworkConfig,
    train_cfg: TrainConfig,
    encoding: Optional[str] = None
) -> Tuple[Network, GrowthTrace]:
    """
    Train one network of net_cfg.hidden_units units without growth.

    The result is reported as a single-phase trace so that it can be
    compared with grown networks.
    """
    if data.input_dim != net_cfg.input_dim or data.output_dim != net_cfg.output_dim:
        raise ConfigError(
            f"Dataset shape {data.input_dim}->{data.output_dim} does not match "
            f"network config {net_cfg.input_dim}->{net_cfg.output_dim}"
        )
    if encoding is None:
        encoding = encoding_for(net_cfg.output_dim)

    net = init_network(net_cfg, Xorshift64Star(net_cfg.seed))
    net, history = train_phase(
        net, data.train, data.valid, train_cfg,
        rng=Xorshift64Star(train_cfg.seed)
    )
    record = evaluate_phase(
        net, data, encoding,
        train_cfg.epochs_per_phase,
        train_cfg.epochs_per_phase
    )
    _log_phase(record)

    trace = GrowthTrace(
        phases=[record],
        termination=FIXED_TOPOLOGY,
        best_phase_index=0,
        histories=[history],
        checkpoints=[net]
    )
    return net, trace
