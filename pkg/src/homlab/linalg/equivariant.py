"""Spans of translation-closed families over F_p, one block per character.

The free module on symbols X(v, P), v in H_L and P in a finite label set,
carries the translation action X(v, P) -> X(v + u, P).  A family that
contains every translate of a template row ``sum coef * X(v + off, P)``
splits, after the discrete Fourier transform over H_L, into independent
blocks indexed by the characters chi_k(v) = zeta^(k.v); in block chi the
template becomes the single row ``sum coef * chi(off) * e_P``.

Over F_p with p = 1 mod L the transform is invertible, so the rank of the
full family equals the sum of the block ranks, exactly over F_p.  Columns
of the full space are ordered ``v_index * n_labels + label``.
"""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import InconsistencyError, InputError
from ..lattice import LatticeParams, index_to_coords
from .modular import ModpEchelon, choose_primes, root_of_unity, to_residue


class TemplateRows:
    """Template rows in CSR form: entries (coef, offset vector index, label)."""

    def __init__(self, rows: Sequence[Sequence[tuple[int, int, int]]]):
        indptr = [0]
        coef, off, lab = [], [], []
        for r in rows:
            for c, o, p in r:
                coef.append(c)
                off.append(o)
                lab.append(p)
            indptr.append(len(coef))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.coef = np.asarray(coef, dtype=np.int64)
        self.offset = np.asarray(off, dtype=np.int64)
        self.label = np.asarray(lab, dtype=np.int64)

    def __len__(self):
        return len(self.indptr) - 1


def character_table(params: LatticeParams, p: int, zeta: int) -> np.ndarray:
    """chi[k, v] = zeta^(k.v mod L) mod p for all vector indices k, v."""
    L, n = params.L, params.rank
    coords = np.array([index_to_coords(i, L, n) for i in range(params.size)], dtype=np.int64)
    dots = (coords @ coords.T) % L
    powers = np.array([pow(zeta, e, p) for e in range(L)], dtype=np.int64)
    return powers[dots]


class CharacterBlockSpan:
    def __init__(self, params: LatticeParams, n_labels: int, primes: Sequence[int] | None = None,
                 seed: int = 0):
        self.params = params
        self.n_labels = n_labels
        self.primes = tuple(primes) if primes else tuple(choose_primes(2, seed, modulus=params.L))
        for p in self.primes:
            if (p - 1) % params.L:
                raise InputError(f"prime {p} is not 1 mod {params.L}")
        self._chi = {}
        self._blocks = {}
        for p in self.primes:
            self._chi[p] = character_table(params, p, root_of_unity(params.L, p))
            self._blocks[p] = [ModpEchelon(n_labels, p) for _ in range(params.size)]

    @property
    def ncols(self) -> int:
        return self.params.size * self.n_labels

    def _agree(self, values: dict, what: str):
        if len(set(values.values())) != 1:
            raise InconsistencyError(f"{what} disagrees across primes: {values}")
        return next(iter(values.values()))

    def ranks_by_prime(self) -> dict[int, int]:
        return {p: sum(b.rank for b in blocks) for p, blocks in self._blocks.items()}

    @property
    def rank(self) -> int:
        return self._agree(self.ranks_by_prime(), "rank")

    def copy(self) -> "CharacterBlockSpan":
        out = CharacterBlockSpan.__new__(CharacterBlockSpan)
        out.params, out.n_labels, out.primes = self.params, self.n_labels, self.primes
        out._chi = self._chi
        out._blocks = {p: [b.copy() for b in blocks] for p, blocks in self._blocks.items()}
        return out

    def extend_templates(self, templates: TemplateRows) -> int:
        """Add every translate of every template row; returns the rank increase."""
        gains = {}
        for p in self.primes:
            chi = self._chi[p]
            gain = 0
            for k, block in enumerate(self._blocks[p]):
                vals = (templates.coef * chi[k][templates.offset]) % p
                gain += block.add_rows_csr(templates.indptr, templates.label, vals)
            gains[p] = gain
        return self._agree(gains, "rank increase")

    def extend_labels(self, labels: Sequence[int]) -> int:
        """Add X(v, P) for all v and each label P; returns the rank increase."""
        rows = TemplateRows([[(1, 0, P)] for P in labels])
        return self.extend_templates(rows)

    def _transform(self, vec: Mapping[int, object], p: int) -> list[dict[int, int]]:
        m = self.n_labels
        by_label: dict[int, list[tuple[int, int]]] = {}
        for col, val in vec.items():
            v, lab = divmod(col, m)
            if not 0 <= v < self.params.size:
                raise IndexError(f"column {col} out of range {self.ncols}")
            r = to_residue(val, p)
            if r:
                by_label.setdefault(lab, []).append((v, r))
        chi = self._chi[p]
        out = []
        for k in range(self.params.size):
            row = {}
            for lab, terms in by_label.items():
                s = sum(r * int(chi[k][v]) for v, r in terms) % p
                if s:
                    row[lab] = s
            out.append(row)
        return out

    def contains(self, vec: Mapping[int, object]) -> bool:
        """Membership of an arbitrary vector, blockwise after the Fourier transform."""
        answers = {}
        for p in self.primes:
            blocks = self._blocks[p]
            ok = True
            for k, row in enumerate(self._transform(vec, p)):
                if row and not blocks[k].is_member(list(row), list(row.values())):
                    ok = False
                    break
            answers[p] = ok
        return self._agree(answers, "membership")

    def contains_label(self, label: int) -> bool:
        """Whether X(v, label) lies in the span (the answer is the same for every v)."""
        return self.contains({label: 1})
