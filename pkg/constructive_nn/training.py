"""
Error functions, backpropagation and online gradient descent.

The per-pattern error is half the summed squared difference between the
desired and actual outputs; the set error is its mean over all patterns.
Training updates the weights after every pattern with momentum:

    v <- momentum * v - learning_rate * g
    w <- w + v
"""

from dataclasses import dataclass, field
import logging
from typing import List, Optional, Tuple
import numpy as np
import pandas as pd
from constructive_nn.data.patterns import PatternSet
from constructive_nn.errors import ConfigError, InputError
from constructive_nn.helpers.rng import Xorshift64Star, MASK64
from constructive_nn.network import (
    Network,
    activation,
    forward,
    forward_batch,
    weighted_sums
)

logger = logging.getLogger(__name__)

PARAMS = ["w_in", "b_hidden", "w_out", "b_out"]


@dataclass
class TrainConfig:
    """Hyperparameters of online backpropagation."""
    # Step size
    learning_rate: float = 0.1
    # Fraction of the previous update carried into the next one
    momentum: float = 0.9
    # Passes over the training set within one growth phase
    epochs_per_phase: int = 500
    # Visit the training patterns in a fresh random order every epoch
    shuffle: bool = True
    # Seed of the shuffling generator
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.learning_rate) or self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, not {self.learning_rate}")
        if not 0 <= self.momentum < 1:
            raise ConfigError(f"momentum must lie in [0, 1), not {self.momentum}")
        if not isinstance(self.epochs_per_phase, (int, np.integer)) or self.epochs_per_phase < 1:
            raise ConfigError(f"epochs_per_phase must be >= 1, not {self.epochs_per_phase}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed <= MASK64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, not {self.seed}")


@dataclass(frozen=True, eq=False)
class Gradients:
    """Partial derivatives, shaped like the matching Network fields."""
    g_w_in: np.ndarray
    g_b_hidden: np.ndarray
    g_w_out: np.ndarray
    g_b_out: np.ndarray

    @classmethod
    def zeros_like(cls, net: Network) -> "Gradients":
        return cls(
            g_w_in=np.zeros_like(net.w_in),
            g_b_hidden=np.zeros_like(net.b_hidden),
            g_w_out=np.zeros_like(net.w_out),
            g_b_out=np.zeros_like(net.b_out)
        )

    def fits(self, net: Network) -> bool:
        return all(
            getattr(self, f"g_{kw}").shape == getattr(net, kw).shape
            for kw in PARAMS
        )

    def as_list(self) -> List[np.ndarray]:
        return [getattr(self, f"g_{kw}") for kw in PARAMS]


@dataclass
class ErrorHistory:
    """Set error after every epoch of one training phase."""
    epochs: List[int] = field(default_factory=list)
    train_error: List[float] = field(default_factory=list)
    valid_error: List[Optional[float]] = field(default_factory=list)

    def append(self, epoch: int, train_error: float, valid_error: Optional[float] = None):
        if len(self.epochs) > 0 and epoch <= self.epochs[-1]:
            raise InputError(f"Epoch {epoch} does not follow epoch {self.epochs[-1]}")
        assert train_error >= 0, train_error
        self.epochs.append(epoch)
        self.train_error.append(train_error)
        self.valid_error.append(valid_error)

    def __len__(self) -> int:
        return len(self.epochs)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(dict(
            epoch=self.epochs,
            train_error=self.train_error,
            valid_error=self.valid_error
        ))


def sample_error(desired, actual) -> float:
    """Half the sum of squared differences between two output vectors."""
    d = np.asarray(desired, dtype=np.float64)
    y = np.asarray(actual, dtype=np.float64)
    if d.shape != y.shape or d.ndim != 1:
        raise InputError(f"Cannot compare vectors of shape {d.shape} and {y.shape}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(y))):
        raise InputError("Error terms must be finite")
    return float(0.5 * np.sum((d - y) ** 2))


def mean_squared_error(net: Network, patterns: PatternSet) -> float:
    """Mean of sample_error over every pattern in the set."""
    if patterns is None or len(patterns) == 0:
        raise InputError("Cannot average the error over an empty pattern set")
    if patterns.output_dim != net.output_dim:
        raise InputError(
            f"Targets have {patterns.output_dim} columns, network has {net.output_dim} outputs"
        )
    output = forward_batch(net, patterns.inputs).output
    errors = 0.5 * np.sum((patterns.targets - output) ** 2, axis=1)
    return float(np.mean(errors))


def _gradients(
    w_in: np.ndarray,
    b_hidden: np.ndarray,
    w_out: np.ndarray,
    b_out: np.ndarray,
    x: np.ndarray,
    d: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    hidden = activation(weighted_sums(w_in, x) + b_hidden)
    y = activation(weighted_sums(w_out, hidden) + b_out)

    delta_out = -(d - y) * y * (1.0 - y)
    delta_hidden = (w_out.T @ delta_out) * hidden * (1.0 - hidden)

    return (
        np.outer(delta_hidden, x),
        delta_hidden,
        np.outer(delta_out, hidden),
        delta_out
    )


def backprop_gradients(net: Network, input, desired) -> Gradients:
    """Analytic partials of sample_error with respect to every weight."""
    x = np.asarray(input, dtype=np.float64)
    d = np.asarray(desired, dtype=np.float64)
    if x.shape != (net.input_dim,):
        raise InputError(f"Input of shape {x.shape} does not fit a {net.shape} network")
    if d.shape != (net.output_dim,):
        raise InputError(f"Target of shape {d.shape} does not fit a {net.shape} network")

    g_w_in, g_b_hidden, g_w_out, g_b_out = _gradients(
        net.w_in, net.b_hidden, net.w_out, net.b_out, x, d
    )
    return Gradients(
        g_w_in=g_w_in,
        g_b_hidden=g_b_hidden,
        g_w_out=g_w_out,
        g_b_out=g_b_out
    )


def numerical_gradients(net: Network, input, desired, step: float = 1e-5) -> Gradients:
    """Central finite differences of sample_error, one weight at a time."""
    d = np.asarray(desired, dtype=np.float64)

    def error_with(kw: str, arr: np.ndarray) -> float:
        return sample_error(d, forward(net.replace(**{kw: arr}), input).output)

    grads = dict()
    for kw in PARAMS:
        base = np.array(getattr(net, kw))
        grad = np.zeros_like(base)
        for i in range(base.size):
            plus = base.copy()
            plus.flat[i] += step
            minus = base.copy()
            minus.flat[i] -= step
            grad.flat[i] = (error_with(kw, plus) - error_with(kw, minus)) / (2 * step)
        grads[f"g_{kw}"] = grad

    return Gradients(**grads)


@dataclass
class GradientCheck:
    max_abs_error: float
    max_rel_error: float
    n_failed: int

    @property
    def passed(self) -> bool:
        return self.n_failed == 0


def gradient_check(
    net: Network,
    input,
    desired,
    step: float = 1e-5,
    rtol: float = 1e-6,
    atol: float = 1e-10
) -> GradientCheck:
    """
    Compare backprop_gradients against numerical_gradients.

    An entry passes when its absolute difference is below atol or its
    difference relative to the larger magnitude is below rtol.
    """
    analytic = np.concatenate([g.ravel() for g in backprop_gradients(net, input, desired).as_list()])
    numeric = np.concatenate([g.ravel() for g in numerical_gradients(net, input, desired, step).as_list()])

    abs_err = np.abs(analytic - numeric)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_err = np.where(scale > 0, abs_err / scale, 0.0)
    failed = (abs_err >= atol) & (rel_err >= rtol)

    return GradientCheck(
        max_abs_error=float(abs_err.max()),
        max_rel_error=float(rel_err.max()),
        n_failed=int(failed.sum())
    )


def train_epoch(
    net: Network,
    train: PatternSet,
    cfg: TrainConfig,
    velocity: Gradients,
    rng: Optional[Xorshift64Star] = None
) -> Tuple[Network, Gradients, float]:
    """
    One pass of per-pattern gradient descent with momentum.

    When cfg.shuffle is set the visiting order is drawn from rng, which is
    advanced. Returns the new network, the carried velocity and the
    training-set error measured after the pass.
    """
    if train.input_dim != net.input_dim or train.output_dim != net.output_dim:
        raise InputError(
            f"Patterns of shape {train.input_dim}->{train.output_dim} "
            f"do not fit a {net.shape} network"
        )
    if not velocity.fits(net):
        raise InputError("Velocity shapes do not match the network")

    if cfg.shuffle:
        if rng is None:
            raise InputError("Shuffling needs a generator")
        order = rng.permutation(len(train))
    else:
        order = range(len(train))

    weights = [np.array(getattr(net, kw)) for kw in PARAMS]
    v = [g.copy() for g in velocity.as_list()]

    for n in order:
        grads = _gradients(*weights, train.inputs[n], train.targets[n])
        for i in range(len(PARAMS)):
            v[i] = cfg.momentum * v[i] - cfg.learning_rate * grads[i]
            weights[i] = weights[i] + v[i]

    if not all(np.all(np.isfinite(w)) for w in weights):
        raise InputError("Training diverged to non-finite weights")

    new_net = Network(**dict(zip(PARAMS, weights)))
    new_velocity = Gradients(**{f"g_{kw}": vel for kw, vel in zip(PARAMS, v)})

    return new_net, new_velocity, mean_squared_error(new_net, train)


def train_phase(
    net: Network,
    train: PatternSet,
    valid: Optional[PatternSet],
    cfg: TrainConfig,
    rng: Optional[Xorshift64Star] = None,
    epochs: Optional[int] = None
) -> Tuple[Network, ErrorHistory]:
    """
    Train for a fixed number of epochs, starting from zero velocity.

    The validation error is recorded every epoch but never used for
    updates. Without an explicit generator one is seeded from cfg.seed.
    """
    if rng is None:
        rng = Xorshift64Star(cfg.seed)
    n_epochs = cfg.epochs_per_phase if epochs is None else epochs
    if n_epochs < 1:
        raise ConfigError(f"A phase needs at least one epoch, not {n_epochs}")

    velocity = Gradients.zeros_like(net)
    history = ErrorHistory()

    for epoch in range(1, n_epochs + 1):
        net, velocity, train_error = train_epoch(net, train, cfg, velocity, rng)
        valid_error = (
            mean_squared_error(net, valid)
            if valid is not None
            else None
        )
        history.append(epoch, train_error, valid_error)

    logger.debug(
        f"Trained {net.shape} for {n_epochs} epochs "
        f"(training error {history.train_error[-1]:.6f})"
    )

    return net, history
