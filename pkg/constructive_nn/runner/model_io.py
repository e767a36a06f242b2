"""
Plain-text model files.

    constructive-nn-model 1
    <input_dim> <hidden_units> <output_dim>
    <w_in row 1>
    ...
    <w_in row hidden_units>
    <b_hidden>
    <w_out row 1>
    ...
    <w_out row output_dim>
    <b_out>

Values on a line are separated by single spaces and written with
repr(float), the shortest decimal that reads back to the same double.
"""

from pathlib import Path
import logging
from typing import List, Union
import numpy as np
from constructive_nn.errors import ConfigError, ModelFormatError
from constructive_nn.network import Network

logger = logging.getLogger(__name__)

MAGIC = "constructive-nn-model"
FORMAT_VERSION = 1


def _format_row(values) -> str:
    return " ".join(repr(float(val)) for val in values)


def format_model(net: Network) -> str:
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"{net.input_dim} {net.hidden_units} {net.output_dim}"
    ]
    lines.extend(_format_row(row) for row in net.w_in)
    lines.append(_format_row(net.b_hidden))
    lines.extend(_format_row(row) for row in net.w_out)
    lines.append(_format_row(net.b_out))
    return "\n".join(lines) + "\n"


def save_model(net: Network, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_model(net))
    logger.info(f"Wrote {net.shape} model to {path}")
    return path


def _parse_row(line: str, n: int, what: str, source) -> List[float]:
    toks = line.split()
    if len(toks) != n:
        raise ModelFormatError(f"{source}: {what} needs {n} values, found {len(toks)}")
    try:
        values = [float(tok) for tok in toks]
    except ValueError:
        raise ModelFormatError(f"{source}: could not parse {what} as numbers")
    if not np.all(np.isfinite(values)):
        raise ModelFormatError(f"{source}: non-finite value in {what}")
    return values


def parse_model(text: str, source="<model>") -> Network:
    lines = [line.strip() for line in text.splitlines()]
    while len(lines) > 0 and len(lines[-1]) == 0:
        lines.pop()
    if len(lines) < 2:
        raise ModelFormatError(f"{source}: truncated model file")

    header = lines[0].split()
    if len(header) != 2 or header[0] != MAGIC:
        raise ModelFormatError(f"{source}: not a model file (expected '{MAGIC} {FORMAT_VERSION}')")
    if header[1] != str(FORMAT_VERSION):
        raise ModelFormatError(
            f"{source}: unsupported format version {header[1]} (expected {FORMAT_VERSION})"
        )

    try:
        input_dim, hidden_units, output_dim = [int(tok) for tok in lines[1].split()]
    except ValueError:
        raise ModelFormatError(f"{source}: line 2 must hold input_dim hidden_units output_dim")
    if min(input_dim, hidden_units, output_dim) < 1:
        raise ModelFormatError(
            f"{source}: every layer needs at least one unit, "
            f"not {input_dim}-{hidden_units}-{output_dim}"
        )

    n_expected = 2 + hidden_units + 1 + output_dim + 1
    if len(lines) < n_expected:
        raise ModelFormatError(
            f"{source}: truncated model file ({len(lines)} of {n_expected} lines)"
        )
    if len(lines) > n_expected:
        raise ModelFormatError(f"{source}: unexpected content after line {n_expected}")

    body = iter(enumerate(lines[2:], start=3))

    def next_row(n, what):
        line_num, line = next(body)
        return _parse_row(line, n, what, f"{source}:{line_num}")

    w_in = [next_row(input_dim, f"w_in row {i + 1}") for i in range(hidden_units)]
    b_hidden = next_row(hidden_units, "b_hidden")
    w_out = [next_row(hidden_units, f"w_out row {i + 1}") for i in range(output_dim)]
    b_out = next_row(output_dim, "b_out")

    try:
        return Network(w_in=w_in, b_hidden=b_hidden, w_out=w_out, b_out=b_out)
    except ConfigError as e:
        raise ModelFormatError(f"{source}: {e}")


def load_model(path: Union[str, Path]) -> Network:
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"Model file not found: {path}")
    net = parse_model(path.read_text(), source=path)
    logger.info(f"Read {net.shape} model from {path}")
    return net
