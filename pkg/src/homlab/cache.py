"""On-disk cache of sparse matrices in the triplet format.

Layout: ``cache_dir/g{g}_L{L}/{object}.v1.triplets``.  Writes go through a
temporary file and a rename, so a reader never sees a half-written file.
A file that fails to parse is rebuilt and overwritten, with a warning.
"""
from __future__ import annotations

import os
import warnings
from pathlib import Path
from typing import Callable

from .errors import InputError
from .lattice import LatticeParams
from .linalg.matrix import SparseRationalMatrix, read_triplets, write_triplets

FORMAT_VERSION = "v1"


class CacheCorruptionWarning(UserWarning):
    pass


class MatrixCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.hits = 0
        self.builds = 0

    def path(self, params: LatticeParams, name: str) -> Path:
        if not name or "/" in name or name.startswith("."):
            raise InputError(f"bad cache object name {name!r}")
        return self.root / f"g{params.g}_L{params.L}" / f"{name}.{FORMAT_VERSION}.triplets"

    def load(self, params: LatticeParams, name: str) -> SparseRationalMatrix | None:
        """The cached matrix, or None when absent or unreadable."""
        p = self.path(params, name)
        if not p.exists():
            return None
        try:
            return read_triplets(p)
        except (InputError, ValueError, ZeroDivisionError, UnicodeDecodeError) as exc:
            msg = f"corrupt cache file {p}: {exc}; rebuilding"
            warnings.warn(msg, CacheCorruptionWarning, stacklevel=3)
            return None

    def store(self, params: LatticeParams, name: str, m: SparseRationalMatrix) -> None:
        write_triplets(self.path(params, name), m)

    def get(self, params: LatticeParams, name: str,
            build: Callable[[], SparseRationalMatrix]) -> SparseRationalMatrix:
        m = self.load(params, name)
        if m is not None:
            self.hits += 1
            return m
        m = build()
        self.builds += 1
        self.store(params, name, m)
        return m


class NoCache:
    """Stand-in used when no cache directory is configured."""

    hits = 0
    builds = 0

    def get(self, params, name, build):
        return build()


def open_cache(cache_dir) -> MatrixCache | NoCache:
    return MatrixCache(cache_dir) if cache_dir else NoCache()
