"""
Deterministic random number generation for every experiment path.

All weights and pattern orders are drawn from a xorshift64* generator
so that a run can be reproduced bit-for-bit by any other implementation
which follows the constants below.

    state update:   x ^= x >> 12
                    x ^= x << 25   (mod 2**64)
                    x ^= x >> 27
    output:         x * 0x2545F4914F6CDD1D   (mod 2**64)

The seed is passed through one splitmix64 step before it becomes the
state, which keeps seed 0 (a fixed point of xorshift) usable:

    z = (seed + 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2**64)
    state = z ^ (z >> 31)        (replaced by GOLDEN if it comes out 0)

Doubles are built from the top 53 bits of an output: (x >> 11) * 2**-53,
which lies in [0, 1).
"""

from typing import List
import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
MULTIPLIER = 0x2545F4914F6CDD1D
GOLDEN = 0x9E3779B97F4A7C15
SPLITMIX_1 = 0xBF58476D1CE4E5B9
SPLITMIX_2 = 0x94D049BB133111EB
DOUBLE_UNIT = 1.0 / (1 << 53)


def _splitmix64(seed: int) -> int:
    z = (seed + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_2) & MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """xorshift64* generator with an explicit, copyable state."""

    state: int

    def __init__(self, seed: int = 0):
        if not isinstance(seed, (int, np.integer)) or seed < 0 or seed > MASK64:
            raise ValueError(f"Seed must be an unsigned 64-bit integer: {seed}")
        self.state = _splitmix64(int(seed)) or GOLDEN

    @classmethod
    def from_state(cls, state: int) -> "Xorshift64Star":
        assert 0 < state <= MASK64, f"Invalid generator state: {state}"
        rng = cls.__new__(cls)
        rng.state = state
        return rng

    def copy(self) -> "Xorshift64Star":
        return Xorshift64Star.from_state(self.state)

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def next_double(self) -> float:
        """Uniform draw from [0, 1)."""
        return (self.next_u64() >> 11) * DOUBLE_UNIT

    def uniform(self, low: float, high: float, shape=()) -> np.ndarray:
        """
        Fill an array of the given shape in C order with draws from
        [low, high), one generator step per element.
        """
        n = int(np.prod(shape, dtype=np.int64)) if shape != () else 1
        vals = np.array(
            [low + (high - low) * self.next_double() for _ in range(n)],
            dtype=np.float64
        )
        return vals.reshape(shape) if shape != () else vals[0]

    def permutation(self, n: int) -> List[int]:
        """Fisher-Yates shuffle of range(n), drawing next_u64() % (i + 1)."""
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            order[i], order[j] = order[j], order[i]
        return order
