"""Hashing utilities for stable run keys and state checksums."""

import hashlib
from pathlib import Path

import numpy as np


def generate_hash(data: str | list[str]) -> str:
    """Generate deterministic SHA256 hash from data.

    Args:
        data: String or list of strings to hash

    Returns:
        Hex digest of hash (64 chars)
    """
    if isinstance(data, list):
        data = "|".join(str(x) for x in data)

    return hashlib.sha256(data.encode("utf-8")).hexdigest()


def array_checksum(array: np.ndarray) -> str:
    """SHA256 over the shape, dtype and raw bytes of an array."""
    contiguous = np.ascontiguousarray(array)
    digest = hashlib.sha256()
    digest.update(f"{contiguous.dtype.str}|{contiguous.shape}".encode("utf-8"))
    digest.update(contiguous.tobytes())
    return digest.hexdigest()


def file_hash(path: Path) -> str:
    """SHA256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def run_key(name: str, rule: str, attack: str, b: int, seed: int) -> str:
    """Stable file stem for one expanded run.

    Format: {name}_{rule}_{attack}_b{b}_s{seed}_{hash[:8]}
    """
    suffix = generate_hash([name, rule, attack, str(b), str(seed)])[:8]
    return f"{name}_{rule}_{attack}_b{b}_s{seed}_{suffix}"
