"""Fox chains of words as 1-chains of the abelian cover.

The edge (j, h) of the cover runs from vertex h to h + x_j and has
coordinate ``j * N + h`` with N = L^{2g}.  ``fox_chains`` evaluates many
padded words at once; the compiled kernel is used when available.
"""
from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from ..groupring import GroupRingElement
from ..lattice import LatticeParams
from .words import FreeWord, letters_array


def fox_chains_numpy(letters: np.ndarray, g: int, L: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized fallback: returns (chains, end vertex indices)."""
    letters = np.asarray(letters, dtype=np.int8)
    B, W = letters.shape
    n = 2 * g
    N = L ** n
    step = np.array([L ** i for i in range(n)], dtype=np.int64)
    chains = np.zeros((B, n * N), dtype=np.int64)
    h = np.zeros(B, dtype=np.int64)
    rows = np.arange(B)
    for t in range(W):
        k = letters[:, t].astype(np.int64)
        pos = k > 0
        neg = k < 0
        j = np.where(pos, k - 1, -k - 1)
        j = np.where(k == 0, 0, j)
        s = step[j]
        digit = (h // s) % L
        # generator: record edge at current vertex, then advance
        if pos.any():
            np.add.at(chains, (rows[pos], j[pos] * N + h[pos]), 1)
        up = np.where(digit == L - 1, h - (L - 1) * s, h + s)
        down = np.where(digit == 0, h + (L - 1) * s, h - s)
        h = np.where(pos, up, np.where(neg, down, h))
        # inverse: step back first, then record the traversed edge negatively
        if neg.any():
            np.add.at(chains, (rows[neg], j[neg] * N + h[neg]), -1)
    return chains, h


if os.environ.get("HOMLAB_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from ._foxchain import fox_chains as _compiled
    except ImportError:  # extension not built
        _compiled = None

fox_chains = _compiled if _compiled is not None else fox_chains_numpy
BACKEND = "compiled" if _compiled is not None else "python"


class FoxChain:
    """The 2g Fox derivatives of a word, as a 1-chain of the cover."""

    __slots__ = ("params", "vector")

    def __init__(self, params: LatticeParams, vector: dict[int, int]):
        self.params = params
        self.vector = {k: v for k, v in vector.items() if v}

    @classmethod
    def of(cls, w: FreeWord) -> "FoxChain":
        p = w.params
        chains, _ = fox_chains(letters_array([w]), p.g, p.L)
        row = chains[0]
        return cls(p, {int(k): int(row[k]) for k in np.flatnonzero(row)})

    def components(self) -> list[GroupRingElement]:
        N = self.params.size
        parts: list[dict[int, Fraction]] = [{} for _ in range(self.params.rank)]
        for k, v in self.vector.items():
            j, h = divmod(k, N)
            parts[j][h] = Fraction(v)
        return [GroupRingElement(self.params, c) for c in parts]

    def __eq__(self, other):
        return isinstance(other, FoxChain) and self.params == other.params and self.vector == other.vector

    def __hash__(self):
        return hash((self.params, frozenset(self.vector.items())))

    def __repr__(self):
        return f"FoxChain({self.params}, nnz={len(self.vector)})"
