from pathlib import Path
from typing import Optional
import numpy as np
import pytest
from constructive_nn.data import PatternSet, SplitDataset, SplitSpec, get_schema, split
from constructive_nn.data.schema import DatasetSchema
from constructive_nn.network import Network, NetworkConfig, init_network

DATA_DIR = Path(__file__).parent.parent / "datasets"


def write_uci_file(
    path: Path,
    schema: DatasetSchema,
    n: Optional[int] = None,
    seed: int = 0,
    n_missing: int = 0
) -> Path:
    """
    Write a synthetic file in the raw UCI layout of a schema.

    The label is a noisy function of the first attribute so that the
    patterns are learnable but not perfectly separable.
    """
    rng = np.random.default_rng(seed)
    n = schema.split.total if n is None else n
    raw_labels = sorted(schema.label_map)
    by_class = {cls: [lab for lab in raw_labels if schema.label_map[lab] == cls] for cls in range(2)}

    lines = []
    for i in range(n):
        attrs = rng.integers(1, 11, size=schema.input_attributes)
        cls = int(attrs[0] > 5)
        if rng.random() < 0.1:
            cls = 1 - cls
        label = by_class[cls][0]
        vals = [str(int(v)) for v in attrs]
        if i < n_missing:
            vals[1] = schema.missing_marker
        ids = [str(1000 + i)] * schema.skip_columns
        label_str = str(int(label)) if float(label).is_integer() else str(label)
        lines.append(",".join(ids + vals + [label_str]))
    path.write_text("\n".join(lines) + "\n")
    return path


def noisy_dataset(n=80, input_dim=3, output_dim=1, seed=0) -> SplitDataset:
    rng = np.random.default_rng(seed)
    inputs = rng.random((n, input_dim))
    classes = (inputs[:, 0] + 0.3 * rng.standard_normal(n) > 0.5).astype(int)
    targets = classes[:, None] if output_dim == 1 else np.eye(output_dim)[classes]
    patterns = PatternSet(inputs=inputs, targets=targets)
    return split(patterns, SplitSpec(n // 2, n // 4, n - n // 2 - n // 4))


def write_config(path: Path, **params) -> Path:
    path.write_text("".join(f"{key.replace('__', '.')}={val}\n" for key, val in params.items()))
    return path


@pytest.fixture
def or_patterns() -> PatternSet:
    return PatternSet(
        inputs=[[0, 0], [0, 1], [1, 0], [1, 1]],
        targets=[[0], [1], [1], [1]]
    )


@pytest.fixture
def zero_net_111() -> Network:
    return Network(w_in=[[0.0]], b_hidden=[0.0], w_out=[[0.0]], b_out=[0.0])


@pytest.fixture
def random_net():
    def make(input_dim=3, hidden_units=2, output_dim=1, seed=0, init_range=0.5):
        return init_network(NetworkConfig(
            input_dim=input_dim,
            hidden_units=hidden_units,
            output_dim=output_dim,
            init_range=init_range,
            seed=seed
        ))
    return make


@pytest.fixture
def cancer_file(tmp_path) -> Path:
    return write_uci_file(tmp_path / "cancer.data", get_schema("cancer"), n_missing=3)
