import json
from pathlib import Path
import numpy as np
from typing import Union


def jsonify(dat):
    if isinstance(dat, (list, tuple, np.ndarray)):
        return [jsonify(val) for val in dat]
    elif isinstance(dat, dict):
        return {str(kw): jsonify(val) for kw, val in dat.items()}
    elif isinstance(dat, (np.integer,)):
        return int(dat)
    elif isinstance(dat, (np.floating,)):
        return float(dat)
    elif isinstance(dat, np.bool_):
        return bool(dat)
    elif isinstance(dat, Path):
        return str(dat)
    else:
        return dat


def write_json(dat, path: Union[str, Path]):
    """Write an object as sorted, indented JSON."""
    try:
        text = json.dumps(jsonify(dat), sort_keys=True, indent=2)
    except (TypeError, ValueError) as e:
        raise ValueError(f"Could not serialize object to JSON: {e}")
    Path(path).write_text(text + "\n")


def read_json(path: Union[str, Path]):
    return json.loads(Path(path).read_text())
