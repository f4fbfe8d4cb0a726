"""Utility modules for byzgossip."""

from .hashing import array_checksum, file_hash, generate_hash, run_key

__all__ = [
    "array_checksum",
    "file_hash",
    "generate_hash",
    "run_key",
]
