import logging
import numpy as np
import pandas as pd
from constructive_nn.data.patterns import PatternSet
from constructive_nn.data.readers import RawRecords
from constructive_nn.data.schema import DatasetSchema
from constructive_nn.errors import SchemaError

logger = logging.getLogger(__name__)


def min_max_normalize(attributes: pd.DataFrame) -> pd.DataFrame:
    """
    Scale every column to [0, 1] using its minimum and maximum.

    A constant column has no range and is encoded as 0.0.
    """
    attributes = attributes.astype(float)
    lo = attributes.min()
    span = attributes.max() - lo

    constant = span[span == 0].index.tolist()
    if len(constant) > 0:
        logger.warning(f"Constant attributes {constant} are encoded as 0.0")

    scaled = (attributes - lo) / span.replace(0, 1.0)
    if len(constant) > 0:
        scaled[constant] = 0.0
    return scaled


def encode_labels(labels: pd.Series, schema: DatasetSchema) -> np.ndarray:
    """Map raw labels to class indices and then to target rows."""
    classes = labels.map(schema.label_map)
    if classes.isnull().any():
        unknown = sorted(labels[classes.isnull()].unique().tolist())
        raise SchemaError(
            f"Labels {unknown} are not in the label_map of schema '{schema.name}'"
        )
    classes = classes.astype(int).values

    if schema.target_encoding == "single_unit":
        return classes.astype(float)[:, None]
    return np.eye(schema.output_classes)[classes]


def encode(records: RawRecords, schema: DatasetSchema) -> PatternSet:
    """Min-max normalize the attributes over the full dataset and encode the labels."""
    if records.attributes.shape[1] != schema.input_attributes:
        raise SchemaError(
            f"{records.attributes.shape[1]} attributes, schema '{schema.name}' "
            f"expects {schema.input_attributes}"
        )
    return PatternSet(
        inputs=min_max_normalize(records.attributes).values,
        targets=encode_labels(records.labels, schema)
    )
