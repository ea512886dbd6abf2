"""Cellular chain complexes of the universal abelian Z/L-covers of the
closed surface and of the surface with one boundary component.

The base CW structure has one vertex, the 2g loops alpha_1, beta_1, ...,
and (closed case) one 2-cell attached along r = prod [alpha_i, beta_i].
In the cover, vertex h is a vector index, edge (j, h) runs from h to
h + x_j (coordinate j*N + h), and the 2-cell at h has boundary equal to
the translate by h of the Fox chain of r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..errors import BudgetExceeded, InputError
from ..lattice import LatticeParams, ZlVector, coords_to_index, index_to_coords
from ..linalg import SparseRationalMatrix, kernel_basis, rank
from .chains import FoxChain, fox_chains
from .words import FreeWord, commutator, conjugate, letters_array

#: cap on the number of 1-cells (2g * L^{2g}) of a cover complex
COVER_BUDGET = 20000


def translation_table(params: LatticeParams) -> np.ndarray:
    """T[u, h] = index of u + h."""
    L, n, N = params.L, params.rank, params.size
    coords = np.array([index_to_coords(i, L, n) for i in range(N)], dtype=np.int64)
    weights = np.array([L ** i for i in range(n)], dtype=np.int64)
    return (((coords[:, None, :] + coords[None, :, :]) % L) @ weights).astype(np.int64)


def translate_chain(params: LatticeParams, vec: dict[int, int], u: ZlVector) -> dict[int, int]:
    """Translate a 1-chain by the deck transformation u."""
    L, n, N = params.L, params.rank, params.size
    out = {}
    for k, v in vec.items():
        j, h = divmod(k, N)
        c = index_to_coords(h, L, n)
        out[j * N + coords_to_index([(a + b) % L for a, b in zip(c, u.coords)], L)] = v
    return out


@dataclass(frozen=True)
class H1Dims:
    h1: int
    c_dim: int
    i_dim: int


class CoverComplex:
    def __init__(self, params: LatticeParams, closed: bool, budget: int | None = None):
        budget = COVER_BUDGET if budget is None else budget
        n, N = params.rank, params.size
        if n * N > budget:
            raise BudgetExceeded(f"cover complex with {n * N} edges exceeds budget {budget}")
        self.params = params
        self.closed = closed
        self.n_edges = n * N
        self.translations = translation_table(params)
        T = self.translations
        step_targets = [T[coords_to_index([1 if i == j else 0 for i in range(n)], params.L)] for j in range(n)]
        d1 = {}
        for j in range(n):
            for h in range(N):
                tgt = int(step_targets[j][h])
                if tgt != h:
                    d1[(tgt, j * N + h)] = 1
                    d1[(h, j * N + h)] = -1
        self.d1 = SparseRationalMatrix(N, n * N, d1)
        self.relator = FreeWord.relator(params)
        base = FoxChain.of(self.relator).vector
        rel = {}
        for h in range(N):
            for k, v in base.items():
                j, e = divmod(k, N)
                rel[(j * N + int(T[h][e]), h)] = v
        #: columns are the relator-translate cycles kappa(h) of the bounded cover
        self.relator_translates = SparseRationalMatrix(n * N, N, rel)
        self.d2 = self.relator_translates if closed else None
        self.projection = SparseRationalMatrix(
            n, n * N, {(j, j * N + h): 1 for j in range(n) for h in range(N)})

    # -- ranks ------------------------------------------------------------
    @cached_property
    def rank_d1(self) -> int:
        return rank(self.d1).rank

    @cached_property
    def rank_relators(self) -> int:
        return rank(self.relator_translates).rank

    @property
    def rank_d2(self) -> int:
        return self.rank_relators if self.closed else 0

    @cached_property
    def cycle_basis(self) -> list[dict[int, Fraction]]:
        return kernel_basis(self.d1)

    @cached_property
    def annihilator(self) -> np.ndarray:
        """Integer rows spanning the left kernel of d2; empty (0 rows) when bounded.

        Two cycles are homologous iff these rows agree on them.
        """
        if not self.closed:
            return np.zeros((0, self.n_edges), dtype=np.int64)
        rows = []
        for vec in kernel_basis(self.d2.transpose()):
            den = math.lcm(*(v.denominator for v in vec.values()))
            rows.append({k: int(v * den) for k, v in vec.items()})
        out = np.zeros((len(rows), self.n_edges), dtype=np.int64)
        for i, r in enumerate(rows):
            for k, v in r.items():
                out[i, k] = v
        return out

    # -- classes ----------------------------------------------------------
    def chain(self, w: FreeWord) -> dict[int, int]:
        if w.params != self.params:
            raise InputError(f"word over {w.params} used with complex over {self.params}")
        return FoxChain.of(w).vector

    def coordinates(self, vec: dict[int, int]) -> tuple:
        """H_1 coordinates of a cycle: the annihilator pairing (closed) or the chain itself."""
        if self.closed:
            A = self.annihilator
            x = np.zeros(self.n_edges, dtype=np.int64)
            for k, v in vec.items():
                x[k] = v
            return tuple(int(t) for t in A @ x)
        return tuple(sorted((k, v) for k, v in vec.items() if v))

    def homologous_batch(self, diffs: np.ndarray) -> np.ndarray:
        """For integer cycle differences (rows), whether each is null-homologous."""
        diffs = np.asarray(diffs, dtype=np.int64)
        if self.closed:
            A = self.annihilator
            bound = int(np.abs(A).sum(axis=1).max(initial=0)) * int(np.abs(diffs).max(initial=0))
            if bound >= 2**62:
                raise InputError("annihilator pairing could overflow int64")
            return ~(diffs @ A.T).any(axis=1)
        return ~diffs.any(axis=1)

    def batch_chains(self, words) -> np.ndarray:
        arr = words if isinstance(words, np.ndarray) else letters_array(words)
        return fox_chains(arr, self.params.g, self.params.L)[0]

    def kappa(self, w: ZlVector) -> dict[int, int]:
        """The boundary class at vertex w: the translate of the relator chain by w."""
        col = self.relator_translates.columns()[w.index]
        return {k: int(v) for k, v in col.items()}


def build_cover_complex(params: LatticeParams, closed: bool, budget: int | None = None) -> CoverComplex:
    return CoverComplex(params, closed, budget)


def h1_dims(c: CoverComplex) -> H1Dims:
    """Dimensions of H_1 of the cover, of its kernel C to H_1(surface; Q), and of I."""
    z1 = c.n_edges - c.rank_d1
    h1 = z1 - c.rank_d2
    # rank of the projection on cycles; im d2 projects to zero
    proj_cols = [c.projection.matvec(z) for z in c.cycle_basis]
    proj_rank = rank(SparseRationalMatrix.from_columns(c.params.rank, proj_cols)).rank if proj_cols else 0
    return H1Dims(h1=h1, c_dim=h1 - proj_rank, i_dim=c.rank_relators)


def cycle_class(w: FreeWord, c: CoverComplex) -> tuple:
    if not w.in_kernel():
        raise InputError(f"word {w} has nontrivial abelianization mod {w.params.L}")
    return c.coordinates(c.chain(w))


def bracket_class(x: FreeWord, y: FreeWord, f: FreeWord, c: CoverComplex) -> tuple:
    """Class of f^-1 [x, y] f."""
    return cycle_class(conjugate(commutator(x, y), f), c)
