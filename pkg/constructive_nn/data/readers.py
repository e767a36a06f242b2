import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union
import numpy as np
import pandas as pd
from constructive_nn.data.patterns import PatternSet
from constructive_nn.data.schema import DatasetSchema, SplitSpec
from constructive_nn.errors import DataParseError, InputError, SchemaError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RawRecords:
    """
    Records as read from a raw file, before normalization.

    Both tables are indexed by the line number of each record.
    """
    # One column per input attribute, missing values already handled
    attributes: pd.DataFrame
    # Raw label value of every record
    labels: pd.Series
    # Number of values which were imputed
    n_imputed: int = 0

    def __len__(self) -> int:
        return self.attributes.shape[0]


def _read_lines(path: Path):
    if not path.is_file():
        raise DataParseError("dataset file not found", path=path)
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as e:
        raise DataParseError(f"could not read dataset file ({e})", path=path)
    lines = [
        (line_num, line.strip())
        for line_num, line in enumerate(text.splitlines(), start=1)
        if len(line.strip()) > 0
    ]
    if len(lines) == 0:
        raise DataParseError("dataset file is empty", path=path)
    return lines


def load_raw(path: Union[str, Path], schema: DatasetSchema) -> RawRecords:
    """
    Read comma-separated records (skipped columns, attributes, label).

    Missing-value markers are imputed with the attribute's mean over the
    non-missing entries, or rejected, depending on the schema.
    """
    path = Path(path)
    logger.info(f"Reading in {path}")
    lines = _read_lines(path)

    # Every record must have the schema's column count
    rows = [[tok.strip() for tok in line.split(",")] for _, line in lines]
    widths = pd.Series([len(row) for row in rows], index=[n for n, _ in lines])
    if widths.nunique() == 1 and widths.iloc[0] != schema.columns:
        raise SchemaError(
            f"{path}: records have {widths.iloc[0]} columns, "
            f"schema '{schema.name}' expects {schema.columns}"
        )
    bad_width = widths[widths != schema.columns]
    if bad_width.shape[0] > 0:
        raise DataParseError(
            f"expected {schema.columns} comma-separated values, found {bad_width.iloc[0]}",
            path=path,
            line=int(bad_width.index[0])
        )

    raw = pd.DataFrame(rows, index=widths.index).iloc[:, schema.skip_columns:]
    raw.columns = [f"a{ix + 1}" for ix in range(schema.input_attributes)] + ["label"]

    # Convert every value to a number, keeping track of missing markers
    missing = raw == schema.missing_marker
    values = raw.apply(pd.to_numeric, errors="coerce")
    # to_numeric accepts "inf" and "nan", which are malformed here
    unparsed = (values.isnull() | values.isin([np.inf, -np.inf])) & ~missing
    if unparsed.any().any():
        line_num = int(unparsed.any(axis=1).idxmax())
        cname = unparsed.loc[line_num].idxmax()
        raise DataParseError(
            f"could not parse '{raw.loc[line_num, cname]}' as a number",
            path=path,
            line=line_num
        )
    if missing["label"].any():
        raise DataParseError(
            "class label is missing",
            path=path,
            line=int(missing["label"].idxmax())
        )

    attributes = values.drop(columns=["label"])
    n_missing = int(missing.sum().sum())
    if n_missing > 0:
        if schema.missing_policy == "reject":
            line_num = int(missing.any(axis=1).idxmax())
            raise DataParseError(
                f"missing value '{schema.missing_marker}' not allowed by schema '{schema.name}'",
                path=path,
                line=line_num
            )
        all_missing = [cname for cname, cvals in attributes.items() if cvals.isnull().all()]
        if len(all_missing) > 0:
            raise DataParseError(f"attributes {all_missing} have no values at all", path=path)
        attributes = attributes.fillna(attributes.mean())
        logger.info(f"Imputed {n_missing:,} missing values with attribute means")

    logger.info(f"Read in {attributes.shape[0]:,} records of {attributes.shape[1]} attributes")

    return RawRecords(
        attributes=attributes,
        labels=values["label"],
        n_imputed=n_missing
    )


def _proben1_header(lines, path: Path) -> Tuple[dict, int]:
    header = dict()
    n_header = 0
    for line_num, line in lines:
        if "=" not in line:
            break
        key, value = line.split("=", 1)
        try:
            header[key.strip()] = int(value)
        except ValueError:
            raise DataParseError(f"header value '{value}' is not an integer", path=path, line=line_num)
        n_header += 1

    required = [
        "bool_in", "real_in", "bool_out", "real_out",
        "training_examples", "validation_examples", "test_examples"
    ]
    absent = [kw for kw in required if kw not in header]
    if len(absent) > 0:
        raise DataParseError(f"Proben1 header is missing {absent}", path=path)
    return header, n_header


def load_proben1(path: Union[str, Path], schema: DatasetSchema) -> Tuple[PatternSet, SplitSpec]:
    """
    Read a Proben1 .dt file.

    The file holds already-encoded rows in Proben1's fixed permutation;
    its header supplies the partition sizes. A two-output file read under
    a single_unit schema keeps the index of the hot output.
    """
    path = Path(path)
    logger.info(f"Reading in {path}")
    lines = _read_lines(path)
    header, n_header = _proben1_header(lines, path)

    n_in = header["bool_in"] + header["real_in"]
    n_out = header["bool_out"] + header["real_out"]
    if n_in != schema.input_attributes:
        raise SchemaError(
            f"{path}: {n_in} inputs, schema '{schema.name}' expects {schema.input_attributes}"
        )

    body = lines[n_header:]
    rows = []
    for line_num, line in body:
        toks = line.split()
        if len(toks) != n_in + n_out:
            raise DataParseError(
                f"expected {n_in + n_out} values, found {len(toks)}",
                path=path,
                line=line_num
            )
        try:
            rows.append([float(tok) for tok in toks])
        except ValueError:
            raise DataParseError("could not parse row as numbers", path=path, line=line_num)
    if len(rows) == 0:
        raise DataParseError("no patterns after the header", path=path)

    data = np.array(rows)
    inputs, outputs = data[:, :n_in], data[:, n_in:]

    if n_out == schema.output_units:
        targets = outputs
    elif schema.target_encoding == "single_unit" and n_out == 2:
        targets = np.argmax(outputs, axis=1).astype(float)[:, None]
    elif schema.target_encoding == "one_per_class" and n_out == 1:
        targets = np.eye(schema.output_classes)[outputs[:, 0].astype(int)]
    else:
        raise SchemaError(
            f"{path}: {n_out} outputs cannot be mapped to schema '{schema.name}'"
        )

    spec = SplitSpec(
        train_n=header["training_examples"],
        valid_n=header["validation_examples"],
        test_n=header["test_examples"]
    )
    if spec.total != data.shape[0]:
        raise SchemaError(
            f"{path}: header declares {spec.total} examples, file holds {data.shape[0]}"
        )
    if schema.split is not None and schema.split != spec:
        logger.warning(
            f"Partition sizes in {path} ({spec.train_n}/{spec.valid_n}/{spec.test_n}) "
            f"differ from schema '{schema.name}'; using the file's"
        )

    try:
        patterns = PatternSet(inputs=inputs, targets=targets)
    except InputError as e:
        raise SchemaError(f"{path}: {e}")

    logger.info(f"Read in {len(patterns):,} Proben1 patterns")
    return patterns, spec
