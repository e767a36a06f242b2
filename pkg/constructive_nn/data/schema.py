from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union
from constructive_nn.errors import ConfigError, SchemaError
from constructive_nn.helpers.params import read_key_values

SCHEMA_DIR = Path(__file__).parent / "schemas"

TARGET_ENCODINGS = ["single_unit", "one_per_class"]
MISSING_POLICIES = ["attribute_mean", "reject"]
FILE_FORMATS = ["uci", "proben1"]


@dataclass
class SplitSpec:
    """Sizes of the training, validation and test partitions."""
    train_n: int
    valid_n: int
    test_n: int

    def __post_init__(self):
        for kw in ["train_n", "valid_n", "test_n"]:
            if int(getattr(self, kw)) < 1:
                raise ConfigError(f"{kw} must be >= 1, not {getattr(self, kw)}")

    @property
    def total(self) -> int:
        return self.train_n + self.valid_n + self.test_n


@dataclass
class DatasetSchema:
    """Layout and encoding of one benchmark dataset."""
    # Identifier, e.g. "cancer"
    name: str
    # Attributes fed to the network
    input_attributes: int
    # Output units of the network
    output_units: int
    # Number of distinct classes
    output_classes: int
    # "single_unit" (one 0/1 output) or "one_per_class" (one-hot outputs)
    target_encoding: str
    # How "?" entries are treated: "attribute_mean" or "reject"
    missing_policy: str = "attribute_mean"
    # Total comma-separated columns per raw record (ids, attributes, label)
    columns: Optional[int] = None
    # Leading columns which are ignored (e.g. a sample id)
    skip_columns: int = 0
    # Raw label value -> class index
    label_map: Dict[float, int] = field(default_factory=dict)
    # Marker used for missing values in the raw file
    missing_marker: str = "?"
    # Partition sizes (training, validation, test)
    split: Optional[SplitSpec] = None
    # "uci" (raw comma-separated records) or "proben1" (pre-encoded .dt)
    file_format: str = "uci"
    # Name of the raw file, as distributed upstream
    data_file: Optional[str] = None
    # Where the raw file can be downloaded
    source_url: Optional[str] = None

    def __post_init__(self):
        for kw in ["input_attributes", "output_units", "output_classes"]:
            if getattr(self, kw) < 1:
                raise SchemaError(f"{self.name}: {kw} must be >= 1")
        if self.target_encoding not in TARGET_ENCODINGS:
            raise SchemaError(f"{self.name}: unknown target encoding '{self.target_encoding}'")
        if self.output_units == 1 and self.target_encoding != "single_unit":
            raise SchemaError(f"{self.name}: a single output unit needs single_unit encoding")
        if self.target_encoding == "single_unit" and (
            self.output_units != 1 or self.output_classes != 2
        ):
            raise SchemaError(f"{self.name}: single_unit encoding needs 1 output and 2 classes")
        if self.target_encoding == "one_per_class" and self.output_units != self.output_classes:
            raise SchemaError(f"{self.name}: one_per_class needs one output unit per class")
        if self.missing_policy not in MISSING_POLICIES:
            raise SchemaError(f"{self.name}: unknown missing-value policy '{self.missing_policy}'")
        if self.file_format not in FILE_FORMATS:
            raise SchemaError(f"{self.name}: unknown file format '{self.file_format}'")
        if self.columns is None:
            self.columns = self.skip_columns + self.input_attributes + 1
        if self.columns != self.skip_columns + self.input_attributes + 1:
            raise SchemaError(
                f"{self.name}: {self.columns} columns cannot hold {self.skip_columns} "
                f"skipped columns, {self.input_attributes} attributes and a label"
            )
        bad_classes = [
            cls for cls in self.label_map.values()
            if not 0 <= cls < self.output_classes
        ]
        if len(bad_classes) > 0:
            raise SchemaError(f"{self.name}: label_map points to unknown classes {bad_classes}")

    @property
    def input_dim(self) -> int:
        return self.input_attributes

    @property
    def output_dim(self) -> int:
        return self.output_units


def _parse_label_map(text: str) -> Dict[float, int]:
    label_map = dict()
    for item in text.split(","):
        item = item.strip()
        if len(item) == 0:
            continue
        if ":" not in item:
            raise SchemaError(f"label_map entries look like raw:class, not '{item}'")
        raw, cls = item.split(":", 1)
        try:
            label_map[float(raw)] = int(cls)
        except ValueError:
            raise SchemaError(f"Could not parse label_map entry '{item}'")
    return label_map


def schema_from_params(params: Dict[str, str], source="<schema>") -> DatasetSchema:
    """Build a DatasetSchema from flat key=value strings."""

    def get_int(kw, default=None):
        if kw not in params:
            if default is None:
                raise SchemaError(f"{source}: missing key '{kw}'")
            return default
        try:
            return int(params[kw])
        except ValueError:
            raise SchemaError(f"{source}: '{kw}' must be an integer, not '{params[kw]}'")

    known = {
        "name", "input_attributes", "output_units", "output_classes",
        "target_encoding", "missing_policy", "columns", "skip_columns",
        "label_map", "missing_marker", "train_n", "valid_n", "test_n",
        "file_format", "data_file", "source_url"
    }
    unknown = set(params) - known
    if len(unknown) > 0:
        raise SchemaError(f"{source}: unknown keys {sorted(unknown)}")

    split_keys = [kw for kw in ["train_n", "valid_n", "test_n"] if kw in params]
    if 0 < len(split_keys) < 3:
        raise SchemaError(f"{source}: train_n, valid_n and test_n go together")

    try:
        return DatasetSchema(
            name=params.get("name", Path(str(source)).stem),
            input_attributes=get_int("input_attributes"),
            output_units=get_int("output_units"),
            output_classes=get_int("output_classes"),
            target_encoding=params.get("target_encoding", "single_unit"),
            missing_policy=params.get("missing_policy", "attribute_mean"),
            columns=get_int("columns") if "columns" in params else None,
            skip_columns=get_int("skip_columns", 0),
            label_map=_parse_label_map(params.get("label_map", "")),
            missing_marker=params.get("missing_marker", "?"),
            split=(
                SplitSpec(
                    train_n=get_int("train_n"),
                    valid_n=get_int("valid_n"),
                    test_n=get_int("test_n")
                )
                if len(split_keys) == 3
                else None
            ),
            file_format=params.get("file_format", "uci"),
            data_file=params.get("data_file"),
            source_url=params.get("source_url")
        )
    except ConfigError as e:
        raise SchemaError(f"{source}: {e}")


def read_schema(path: Union[str, Path]) -> DatasetSchema:
    path = Path(path)
    try:
        params = read_key_values(path)
    except ConfigError as e:
        raise SchemaError(str(e))
    return schema_from_params(params, source=path)


def all_schema_names() -> List[str]:
    return sorted(fp.stem for fp in SCHEMA_DIR.glob("*.schema"))


def get_schema(name: str) -> DatasetSchema:
    """Return one of the bundled schemas by name."""
    for schema_name in all_schema_names():
        if schema_name == name:
            return read_schema(SCHEMA_DIR / f"{name}.schema")
    raise SchemaError(
        f"Dataset schema '{name}' not found (bundled: {', '.join(all_schema_names())})"
    )
