from dataclasses import dataclass
from typing import Dict, Optional
import numpy as np
from constructive_nn.data.patterns import PatternSet
from constructive_nn.data.schema import SplitSpec
from constructive_nn.errors import ConfigError
from constructive_nn.helpers.rng import Xorshift64Star

SPLIT_ORDERS = ["file_order", "seeded_shuffle"]
SPLIT_NAMES = ["train", "valid", "test"]


@dataclass(frozen=True, eq=False)
class SplitDataset:
    train: PatternSet
    valid: PatternSet
    test: PatternSet
    # How the patterns were ordered before partitioning
    order: str = "file_order"
    seed: Optional[int] = None

    def splits(self) -> Dict[str, PatternSet]:
        return dict(train=self.train, valid=self.valid, test=self.test)

    @property
    def sizes(self) -> SplitSpec:
        return SplitSpec(
            train_n=len(self.train),
            valid_n=len(self.valid),
            test_n=len(self.test)
        )

    @property
    def input_dim(self) -> int:
        return self.train.input_dim

    @property
    def output_dim(self) -> int:
        return self.train.output_dim


def split(
    patterns: PatternSet,
    spec: SplitSpec,
    order: str = "file_order",
    seed: Optional[int] = None
) -> SplitDataset:
    """
    Take the first train_n, the next valid_n and the last test_n patterns.

    With order="seeded_shuffle" the patterns are first permuted by a
    generator seeded with `seed`.
    """
    if order not in SPLIT_ORDERS:
        raise ConfigError(f"Unknown split order '{order}' (expected one of {SPLIT_ORDERS})")
    if spec.total != len(patterns):
        raise ConfigError(
            f"Split sizes {spec.train_n}/{spec.valid_n}/{spec.test_n} "
            f"sum to {spec.total}, dataset has {len(patterns)} patterns"
        )

    if order == "seeded_shuffle":
        if seed is None:
            raise ConfigError("seeded_shuffle needs a seed")
        index = np.array(Xorshift64Star(seed).permutation(len(patterns)))
    else:
        index = np.arange(len(patterns))

    bounds = np.cumsum([0, spec.train_n, spec.valid_n, spec.test_n])
    parts = [
        patterns.subset(index[bounds[i]:bounds[i + 1]])
        for i in range(3)
    ]

    return SplitDataset(
        train=parts[0],
        valid=parts[1],
        test=parts[2],
        order=order,
        seed=seed if order == "seeded_shuffle" else None
    )
