from typing import Optional


class ConstructiveNNError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(ConstructiveNNError, ValueError):
    """Invalid configuration, or dimensions which cannot fit together."""


class InputError(ConstructiveNNError, ValueError):
    """Invalid inputs to an operation (shape mismatch, empty pattern set)."""


class SchemaError(ConstructiveNNError, ValueError):
    """Data does not match the declared dataset schema or model shape."""


class ModelFormatError(ConstructiveNNError, ValueError):
    """A model file could not be read back."""


class DataParseError(ConstructiveNNError, ValueError):
    """A dataset row could not be parsed."""

    def __init__(self, msg: str, path=None, line: Optional[int] = None):
        self.path = path
        self.line = line
        if line is not None:
            msg = f"{path}:{line}: {msg}"
        elif path is not None:
            msg = f"{path}: {msg}"
        super().__init__(msg)
