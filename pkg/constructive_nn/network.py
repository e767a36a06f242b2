"""
Single-hidden-layer feedforward networks.

Weights are stored as

    w_in      [hidden_units x input_dim]    input -> hidden
    b_hidden  [hidden_units]
    w_out     [output_dim x hidden_units]   hidden -> output
    b_out     [output_dim]

and both layers use the logistic activation. A Network is a value:
its arrays are read-only and every operation returns a new object.
"""

from dataclasses import dataclass
from typing import Optional
import numpy as np
from constructive_nn.errors import ConfigError, InputError
from constructive_nn.helpers.rng import Xorshift64Star, MASK64


@dataclass
class NetworkConfig:
    """Shape and initialization of a freshly created network."""
    # Number of input attributes
    input_dim: int
    # Number of units in the hidden layer
    hidden_units: int = 1
    # Number of output units
    output_dim: int = 1
    # Weights are drawn uniformly from [-init_range, +init_range]
    init_range: float = 0.5
    # Seed of the weight generator (unsigned 64-bit)
    seed: int = 0

    def __post_init__(self):
        for kw in ["input_dim", "hidden_units", "output_dim"]:
            val = getattr(self, kw)
            if not isinstance(val, (int, np.integer)) or val < 1:
                raise ConfigError(f"{kw} must be an integer >= 1, not {val}")
        if not np.isfinite(self.init_range) or self.init_range <= 0:
            raise ConfigError(f"init_range must be > 0, not {self.init_range}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed <= MASK64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, not {self.seed}")


@dataclass(frozen=True, eq=False)
class Network:
    w_in: np.ndarray
    b_hidden: np.ndarray
    w_out: np.ndarray
    b_out: np.ndarray

    def __post_init__(self):
        arrays = dict()
        for kw in ["w_in", "b_hidden", "w_out", "b_out"]:
            arr = np.array(getattr(self, kw), dtype=np.float64)
            arr.setflags(write=False)
            arrays[kw] = arr
            object.__setattr__(self, kw, arr)

        if arrays["w_in"].ndim != 2 or arrays["w_out"].ndim != 2:
            raise ConfigError("w_in and w_out must be matrices")
        if arrays["b_hidden"].ndim != 1 or arrays["b_out"].ndim != 1:
            raise ConfigError("b_hidden and b_out must be vectors")

        hidden, input_dim = arrays["w_in"].shape
        output_dim = arrays["w_out"].shape[0]
        if hidden < 1 or input_dim < 1 or output_dim < 1:
            raise ConfigError(
                f"Every layer needs at least one unit: {input_dim}-{hidden}-{output_dim}"
            )
        if arrays["w_out"].shape[1] != hidden:
            raise ConfigError(
                f"w_out has {arrays['w_out'].shape[1]} columns, expected {hidden}"
            )
        if arrays["b_hidden"].shape[0] != hidden:
            raise ConfigError(f"b_hidden has length {arrays['b_hidden'].shape[0]}, expected {hidden}")
        if arrays["b_out"].shape[0] != output_dim:
            raise ConfigError(f"b_out has length {arrays['b_out'].shape[0]}, expected {output_dim}")
        for kw, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                raise ConfigError(f"Non-finite value in {kw}")

    @property
    def input_dim(self) -> int:
        return self.w_in.shape[1]

    @property
    def hidden_units(self) -> int:
        return self.w_in.shape[0]

    @property
    def output_dim(self) -> int:
        return self.w_out.shape[0]

    @property
    def shape(self) -> str:
        """Topology written as input-hidden-output, e.g. '9-1-1'."""
        return f"{self.input_dim}-{self.hidden_units}-{self.output_dim}"

    def same_weights(self, other: "Network") -> bool:
        """Bit-exact equality of every weight and bias."""
        return all(
            np.array_equal(getattr(self, kw), getattr(other, kw))
            for kw in ["w_in", "b_hidden", "w_out", "b_out"]
        )

    def replace(self, **kwargs) -> "Network":
        params = dict(
            w_in=self.w_in,
            b_hidden=self.b_hidden,
            w_out=self.w_out,
            b_out=self.b_out
        )
        params.update(kwargs)
        return Network(**params)


@dataclass(frozen=True, eq=False)
class Activations:
    hidden: np.ndarray
    output: np.ndarray


@dataclass(frozen=True)
class NewUnitInit:
    """How the weights of an added hidden unit are chosen."""
    # Either "random" (uniform in [-init_range, +init_range]) or "zero"
    mode: str = "random"
    init_range: float = 0.5

    def __post_init__(self):
        if self.mode not in ["random", "zero"]:
            raise ConfigError(f"Unknown new-unit initialization: '{self.mode}'")
        if self.mode == "random" and not self.init_range > 0:
            raise ConfigError(f"init_range must be > 0, not {self.init_range}")

    @classmethod
    def random(cls, init_range: float = 0.5) -> "NewUnitInit":
        return cls(mode="random", init_range=init_range)

    @classmethod
    def zero(cls) -> "NewUnitInit":
        return cls(mode="zero", init_range=0.0)


def init_network(config: NetworkConfig, rng: Optional[Xorshift64Star] = None) -> Network:
    """
    Draw every weight uniformly from [-r, +r].

    Draw order: w_in (row by row), b_hidden, w_out (row by row), b_out.
    Without an explicit generator one is seeded from config.seed.
    """
    if not isinstance(config, NetworkConfig):
        raise ConfigError(f"Expected a NetworkConfig, got {type(config)}")
    if rng is None:
        rng = Xorshift64Star(config.seed)
    r = config.init_range

    return Network(
        w_in=rng.uniform(-r, r, (config.hidden_units, config.input_dim)),
        b_hidden=rng.uniform(-r, r, (config.hidden_units,)),
        w_out=rng.uniform(-r, r, (config.output_dim, config.hidden_units)),
        b_out=rng.uniform(-r, r, (config.output_dim,))
    )


def activation(x):
    """Logistic sigmoid, saturating to 0 or 1 for very large |x|."""
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def weighted_sums(weights: np.ndarray, values: np.ndarray) -> np.ndarray:
    # Sums run strictly left to right over the last axis so that a unit's
    # pre-activation does not depend on how many other units share its layer
    return np.cumsum(weights * values, axis=-1)[..., -1]


def _check_inputs(net: Network, inputs: np.ndarray, ndim: int) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != ndim or inputs.shape[-1] != net.input_dim:
        raise InputError(
            f"Input of shape {inputs.shape} does not fit a {net.shape} network"
        )
    if not np.all(np.isfinite(inputs)):
        raise InputError("Inputs must be finite")
    return inputs


def forward(net: Network, input) -> Activations:
    x = _check_inputs(net, input, ndim=1)
    hidden = activation(weighted_sums(net.w_in, x) + net.b_hidden)
    output = activation(weighted_sums(net.w_out, hidden) + net.b_out)
    return Activations(hidden=hidden, output=output)


def forward_batch(net: Network, inputs) -> Activations:
    """
    Forward pass over a [N x input_dim] matrix.

    Row n of the result is bit-identical to forward(net, inputs[n]).
    """
    X = _check_inputs(net, inputs, ndim=2)
    hidden = activation(
        weighted_sums(net.w_in[None, :, :], X[:, None, :]) + net.b_hidden
    )
    output = activation(
        weighted_sums(net.w_out[None, :, :], hidden[:, None, :]) + net.b_out
    )
    return Activations(hidden=hidden, output=output)


def add_hidden_unit(
    net: Network,
    mode: NewUnitInit,
    rng: Optional[Xorshift64Star] = None
) -> Network:
    """
    Return a copy of the network with one more hidden unit.

    Existing weights are carried over unchanged. The new unit's input
    weights, then its bias, then its outgoing weights are drawn from rng
    (advancing it) when mode is random, or set to zero.
    """
    if not isinstance(net, Network):
        raise InputError(f"Expected a Network, got {type(net)}")

    if mode.mode == "zero":
        new_in = np.zeros(net.input_dim)
        new_bias = 0.0
        new_out = np.zeros(net.output_dim)
    else:
        if rng is None:
            raise InputError("Random new-unit initialization needs a generator")
        r = mode.init_range
        new_in = rng.uniform(-r, r, (net.input_dim,))
        new_bias = rng.uniform(-r, r)
        new_out = rng.uniform(-r, r, (net.output_dim,))

    return Network(
        w_in=np.vstack([net.w_in, new_in[None, :]]),
        b_hidden=np.append(net.b_hidden, new_bias),
        w_out=np.hstack([net.w_out, new_out[:, None]]),
        b_out=net.b_out.copy()
    )


def check_carry_over(old: Network, grown: Network) -> bool:
    """True if grown holds every weight of old, bit for bit, plus one unit."""
    h = old.hidden_units
    return (
        grown.hidden_units == h + 1
        and grown.input_dim == old.input_dim
        and grown.output_dim == old.output_dim
        and np.array_equal(grown.w_in[:h], old.w_in)
        and np.array_equal(grown.b_hidden[:h], old.b_hidden)
        and np.array_equal(grown.w_out[:, :h], old.w_out)
        and np.array_equal(grown.b_out, old.b_out)
    )
