"""Immutable sparse matrices over Q and their textual triplet format.

Triplet files start with a header ``rows cols nnz`` followed by one line
``row col numerator/denominator`` per stored entry (the ``/1`` may be
omitted when reading).
"""
from __future__ import annotations

import os
import tempfile
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from ..errors import InputError

SparseVector = Mapping[int, Fraction]


def clean_vector(entries) -> dict[int, Fraction]:
    """Copy a sparse vector, coercing values to Fraction and dropping zeros."""
    items = entries.items() if hasattr(entries, "items") else entries
    out: dict[int, Fraction] = {}
    for k, v in items:
        out[k] = out.get(k, 0) + Fraction(v)
    return {k: v for k, v in out.items() if v}


class SparseRationalMatrix:
    """A rows x cols matrix with exact rational entries and no stored zeros."""

    __slots__ = ("_rows", "_cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | Iterable = ()):
        if rows < 0 or cols < 0:
            raise InputError(f"negative shape ({rows}, {cols})")
        if hasattr(entries, "items"):
            items = entries.items()
        else:
            items = (((r, c), v) for r, c, v in entries)
        data: dict[tuple[int, int], Fraction] = {}
        for key, v in items:
            r, c = key
            if not (0 <= r < rows and 0 <= c < cols):
                raise InputError(f"entry ({r}, {c}) outside shape ({rows}, {cols})")
            if (r, c) in data:
                raise InputError(f"duplicate entry at ({r}, {c})")
            v = Fraction(v)
            if v:
                data[(r, c)] = v
        self._rows = rows
        self._cols = cols
        self._entries = MappingProxyType(data)

    # -- construction helpers ----------------------------------------
    @classmethod
    def from_columns(cls, n_rows: int, columns: Iterable[Mapping[int, object]]) -> "SparseRationalMatrix":
        entries = {}
        c = -1
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    entries[(r, c)] = v
        return cls(n_rows, c + 1, entries)

    @classmethod
    def from_rows(cls, n_cols: int, rows: Iterable[Mapping[int, object]]) -> "SparseRationalMatrix":
        entries = {}
        r = -1
        for r, row in enumerate(rows):
            for c, v in row.items():
                if v:
                    entries[(r, c)] = v
        return cls(r + 1, n_cols, entries)

    @classmethod
    def from_dense(cls, rows) -> "SparseRationalMatrix":
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        return cls(len(rows), n_cols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    # -- accessors ----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def entries(self) -> Mapping[tuple[int, int], Fraction]:
        return self._entries

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self._cols)]
        for (r, c), v in sorted(self._entries.items()):
            cols[c][r] = v
        return cols

    def row_vectors(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [{} for _ in range(self._rows)]
        for (r, c), v in sorted(self._entries.items()):
            rows[r][c] = v
        return rows

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self._cols, self._rows, {(c, r): v for (r, c), v in self._entries.items()})

    def permuted(self, row_perm, col_perm) -> "SparseRationalMatrix":
        """Matrix with entry (r, c) moved to (row_perm[r], col_perm[c])."""
        return SparseRationalMatrix(self._rows, self._cols,
                                    {(row_perm[r], col_perm[c]): v for (r, c), v in self._entries.items()})

    def hstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if other.rows != self.rows:
            raise InputError(f"hstack row mismatch {self.rows} vs {other.rows}")
        entries = dict(self._entries)
        entries.update({(r, c + self._cols): v for (r, c), v in other.entries.items()})
        return SparseRationalMatrix(self._rows, self._cols + other.cols, entries)

    def matvec(self, x: Mapping[int, object]) -> dict[int, Fraction]:
        """Exact product M @ x for a sparse column vector x."""
        out: dict[int, Fraction] = {}
        for (r, c), v in self._entries.items():
            xc = x.get(c)
            if xc:
                out[r] = out.get(r, 0) + v * xc
        return {r: v for r, v in out.items() if v}

    def matmul(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise InputError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self._entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return SparseRationalMatrix(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self._cols for _ in range(self._rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other):
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and dict(self._entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseRationalMatrix({self._rows}x{self._cols}, nnz={self.nnz})"


# -- triplet serialization -------------------------------------------

def format_fraction(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def dumps_triplets(m: SparseRationalMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.nnz}"]
    for (r, c), v in sorted(m.entries.items()):
        lines.append(f"{r} {c} {format_fraction(v)}")
    return "\n".join(lines) + "\n"


def loads_triplets(text: str) -> SparseRationalMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty triplet document")
    try:
        rows, cols, nnz = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise InputError(f"bad triplet header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != nnz:
        raise InputError(f"header announces {nnz} entries, found {len(body)}")
    entries = {}
    for ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise InputError(f"bad triplet line {ln!r}")
        r, c = int(parts[0]), int(parts[1])
        if (r, c) in entries:
            raise InputError(f"duplicate entry at ({r}, {c})")
        entries[(r, c)] = Fraction(parts[2])
    return SparseRationalMatrix(rows, cols, entries)


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_triplets(path, m: SparseRationalMatrix) -> None:
    atomic_write_text(path, dumps_triplets(m))


def read_triplets(path) -> SparseRationalMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads_triplets(fh.read())
