import hashlib
from pathlib import Path
from typing import Union


def hash_dat(dat: bytes, n: Union[int, None] = 16):
    """Compute the hash of an object."""
    hash = hashlib.sha256()
    hash.update(dat)
    hex = hash.hexdigest()
    if n is not None:
        hex = hex[:n]
    return hex


def hash_file(path: Union[str, Path], n: Union[int, None] = None):
    """SHA-256 of a file's bytes (full digest unless n is given)."""
    return hash_dat(Path(path).read_bytes(), n=n)
