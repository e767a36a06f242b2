import logging
from pathlib import Path
from typing import Optional, Union
from constructive_nn.data.encode import encode # noqa
from constructive_nn.data.patterns import PatternSet # noqa
from constructive_nn.data.readers import RawRecords, load_raw, load_proben1 # noqa
from constructive_nn.data.schema import ( # noqa
    DatasetSchema,
    SplitSpec,
    all_schema_names,
    get_schema,
    read_schema
)
from constructive_nn.data.split import SplitDataset, split # noqa
from constructive_nn.errors import SchemaError

logger = logging.getLogger(__name__)


def load_dataset(
    path: Union[str, Path],
    schema: DatasetSchema,
    order: str = "file_order",
    seed: Optional[int] = None
) -> SplitDataset:
    """Read, encode and partition a dataset file in one step."""
    if schema.file_format == "proben1":
        patterns, spec = load_proben1(path, schema)
    else:
        patterns = encode(load_raw(path, schema), schema)
        spec = schema.split
        if spec is None:
            raise SchemaError(f"Schema '{schema.name}' does not declare split sizes")

    dataset = split(patterns, spec, order=order, seed=seed)
    logger.info(
        f"Split {schema.name} ({order}"
        + (f", seed={seed}" if dataset.seed is not None else "")
        + f"): {spec.train_n}/{spec.valid_n}/{spec.test_n}"
    )
    return dataset
