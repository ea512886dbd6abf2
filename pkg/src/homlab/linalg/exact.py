"""Exact sparse row echelon form over Q with reconstructible certificates.

Rows are reduced but not back-substituted: pivot row k is zero at the
pivot columns of every older pivot, so reducing a vector means
eliminating pivots in creation order.  For every pivot we keep the
multipliers used while reducing its source row (the "L factors").  That
is enough to express any reduced vector as an explicit rational
combination of the original input rows.

Pivot rows are never mutated after creation, which makes ``copy`` cheap
and lets several echelons share a common prefix.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .matrix import clean_vector

_ZERO = Fraction(0)


class ExactEchelon:
    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[dict[int, Fraction]] = []
        self._pcol: list[int] = []
        self._piv_of_col: dict[int, int] = {}
        self._source: list[Hashable] = []
        self._factors: list[tuple[tuple[tuple[int, Fraction], ...], Fraction]] = []
        self._colcount: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def pivot_columns(self) -> list[int]:
        return list(self._pcol)

    def sources(self) -> list[Hashable]:
        """Source labels of the independent rows, in pivot creation order."""
        return list(self._source)

    def copy(self) -> "ExactEchelon":
        out = ExactEchelon.__new__(ExactEchelon)
        out.ncols = self.ncols
        out._rows = list(self._rows)
        out._pcol = list(self._pcol)
        out._piv_of_col = dict(self._piv_of_col)
        out._source = list(self._source)
        out._factors = list(self._factors)
        out._colcount = dict(self._colcount)
        return out

    def _reduce(self, vec: Mapping[int, object]) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
        acc = clean_vector(vec)
        for c in acc:
            if not 0 <= c < self.ncols:
                raise IndexError(f"column {c} out of range {self.ncols}")
        piv = self._piv_of_col
        heap = [piv[c] for c in acc if c in piv]
        heapq.heapify(heap)
        queued = set(heap)
        mult: dict[int, Fraction] = {}
        while heap:
            k = heapq.heappop(heap)
            f = acc.get(self._pcol[k])
            if not f:
                continue
            mult[k] = f
            for c, val in self._rows[k].items():
                nv = acc.get(c, _ZERO) - f * val
                if nv:
                    acc[c] = nv
                    j = piv.get(c)
                    if j is not None and j not in queued:
                        queued.add(j)
                        heapq.heappush(heap, j)
                else:
                    acc.pop(c, None)
        return acc, mult

    def residual(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        return self._reduce(vec)[0]

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self._reduce(vec)[0]

    def add(self, vec: Mapping[int, object], source: Hashable = None) -> bool:
        """Insert a row; True iff it was independent of the current span."""
        res, mult = self._reduce(vec)
        if not res:
            return False
        cc = self._colcount
        # fill-reducing choice: the column touched by the fewest pivot rows
        pc = min(res, key=lambda c: (cc.get(c, 0), c))
        alpha = res[pc]
        row = {c: v / alpha for c, v in res.items()}
        k = len(self._rows)
        self._rows.append(row)
        self._pcol.append(pc)
        self._piv_of_col[pc] = k
        self._source.append(k if source is None else source)
        self._factors.append((tuple(sorted(mult.items())), alpha))
        for c in row:
            cc[c] = cc.get(c, 0) + 1
        return True

    def extend(self, vectors: Iterable[Mapping[int, object]], sources: Iterable[Hashable] | None = None,
               markowitz: bool = True) -> list[bool]:
        """Insert many rows, sparsest first; returns independence flags in input order."""
        vecs = [clean_vector(v) for v in vectors]
        labels = list(range(len(vecs))) if sources is None else list(sources)
        if len(labels) != len(vecs):
            raise ValueError("sources and vectors differ in length")
        order = sorted(range(len(vecs)), key=lambda i: len(vecs[i])) if markowitz else range(len(vecs))
        flags = [False] * len(vecs)
        for i in order:
            flags[i] = self.add(vecs[i], labels[i])
        return flags

    def certificate(self, vec: Mapping[int, object]) -> dict[Hashable, Fraction] | None:
        """Coefficients c with sum(c[s] * row_s) == vec over source rows, or None."""
        res, mult = self._reduce(vec)
        if res:
            return None
        m = dict(mult)
        heap = [-k for k in m]
        heapq.heapify(heap)
        coef: dict[Hashable, Fraction] = {}
        while heap:
            k = -heapq.heappop(heap)
            mk = m.pop(k, _ZERO)
            if not mk:
                continue
            factors, alpha = self._factors[k]
            s = mk / alpha
            src = self._source[k]
            coef[src] = coef.get(src, _ZERO) + s
            for j, f in factors:
                if j in m:
                    m[j] -= s * f
                else:
                    m[j] = -s * f
                    heapq.heappush(heap, -j)
        return {k: v for k, v in coef.items() if v}

    def kernel_of_rows(self) -> list[dict[int, Fraction]]:
        """Basis of {x : row . x = 0 for every inserted row}, one vector per free column."""
        free = [c for c in range(self.ncols) if c not in self._piv_of_col]
        basis = []
        for fc in free:
            x: dict[int, Fraction] = {fc: Fraction(1)}
            for k in range(len(self._rows) - 1, -1, -1):
                pc = self._pcol[k]
                s = _ZERO
                for c, val in self._rows[k].items():
                    if c != pc and c in x:
                        s += val * x[c]
                if s:
                    x[pc] = -s
            basis.append(x)
        return basis
