from pathlib import Path
from typing import Dict, Union
from constructive_nn.errors import ConfigError


def nest_params(params: dict):
    """Turn {"train.seed": 1} into {"train": {"seed": 1}}."""
    output = dict()
    for key, value in params.items():
        if '.' in key:
            keys = key.split('.', 1)
            if keys[0] not in output:
                output[keys[0]] = dict()
            if not isinstance(output[keys[0]], dict):
                raise ConfigError(
                    f"Key '{key}' conflicts with the value of '{keys[0]}'"
                )
            output[keys[0]][keys[1]] = value
        else:
            if isinstance(output.get(key), dict):
                raise ConfigError(f"Key '{key}' conflicts with its own section")
            output[key] = value
    return {
        key: nest_params(value) if isinstance(value, dict) else value
        for key, value in output.items()
    }


def flatten_params(params: dict, prefix: str = "") -> Dict[str, object]:
    """Inverse of nest_params."""
    flat = dict()
    for key, value in params.items():
        full_key = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_params(value, prefix=f"{full_key}."))
        else:
            flat[full_key] = value
    return flat


def parse_key_values(text: str, source: Union[str, Path] = "<text>") -> Dict[str, str]:
    """
    Parse flat key=value text.

    Blank lines and lines starting with '#' are skipped. Keys may not
    repeat. Values are returned as stripped strings.
    """
    params = dict()
    for line_num, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if len(line) == 0 or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_num}: expected key=value, got '{line}'")
        key, value = line.split("=", 1)
        key = key.strip()
        if len(key) == 0:
            raise ConfigError(f"{source}:{line_num}: empty key")
        if key in params:
            raise ConfigError(f"{source}:{line_num}: duplicate key '{key}'")
        params[key] = value.strip()
    return params


def read_key_values(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"File not found: {path}")
    return parse_key_values(path.read_text(), source=path)


def format_key_values(params: Dict[str, object]) -> str:
    return "".join(f"{key}={value}\n" for key, value in params.items())
