"""The symplectic lattice H_L = (Z/L)^{2g}.

Coordinates are ordered ``(a1, b1, ..., ag, bg)`` and the intersection
pairing is normalized so that ``i(a_j, b_j) = 1``.  Vectors are indexed in
mixed radix with ``a1`` least significant::

    index(v) = sum(coords[i] * L**i)

which fixes the column order of every matrix built downstream.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import divisor_count

from .errors import BudgetExceeded, InputError, ParameterError

#: default cap on the number of lattice vectors any enumeration may visit
ENUMERATION_BUDGET = 10**6
#: default cap for the transvection BFS oracle
BFS_BUDGET = 5000

_INDEX_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class LatticeParams:
    g: int
    L: int

    def __post_init__(self):
        if not isinstance(self.g, int) or not isinstance(self.L, int):
            raise ParameterError(f"g and L must be integers, got {self.g!r}, {self.L!r}")
        if self.g < 1:
            raise ParameterError(f"genus must be >= 1, got {self.g}")
        if self.L < 2:
            raise ParameterError(f"level must be >= 2, got {self.L}")
        if self.L ** (2 * self.g) > _INDEX_LIMIT:
            raise ParameterError(f"|H_L| = {self.L}^{2 * self.g} does not fit a 64-bit index")

    @property
    def rank(self) -> int:
        """Number of coordinates, 2g."""
        return 2 * self.g

    @property
    def size(self) -> int:
        """|H_L| = L^{2g}."""
        return self.L ** (2 * self.g)

    def __str__(self):
        return f"(g={self.g}, L={self.L})"


@dataclass(frozen=True)
class ZlVector:
    params: LatticeParams
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) % self.params.L for c in self.coords)
        if len(coords) != self.params.rank:
            raise ParameterError(f"expected {self.params.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, params: LatticeParams) -> "ZlVector":
        return cls(params, (0,) * params.rank)

    @classmethod
    def basis(cls, params: LatticeParams, j: int) -> "ZlVector":
        """The j-th standard basis vector, 0-based over (a1, b1, ..., ag, bg)."""
        c = [0] * params.rank
        c[j] = 1
        return cls(params, tuple(c))

    @classmethod
    def a(cls, params: LatticeParams, i: int) -> "ZlVector":
        """a_i with 1-based i."""
        return cls.basis(params, 2 * (i - 1))

    @classmethod
    def b(cls, params: LatticeParams, i: int) -> "ZlVector":
        """b_i with 1-based i."""
        return cls.basis(params, 2 * (i - 1) + 1)

    @classmethod
    def from_index(cls, params: LatticeParams, index: int) -> "ZlVector":
        if not 0 <= index < params.size:
            raise InputError(f"index {index} out of range for {params}")
        return cls(params, index_to_coords(index, params.L, params.rank))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "ZlVector"):
        if not isinstance(other, ZlVector):
            return NotImplemented
        if other.params != self.params:
            raise ParameterError(f"mismatched parameters {self.params} vs {other.params}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ZlVector(self.params, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ZlVector(self.params, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return ZlVector(self.params, tuple(-x for x in self.coords))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return ZlVector(self.params, tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    @property
    def index(self) -> int:
        return coords_to_index(self.coords, self.params.L)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def label(self) -> str:
        """Human readable form such as ``a1+2b2``; ``0`` for the zero vector."""
        parts = []
        for j, c in enumerate(self.coords):
            if c:
                name = ("a" if j % 2 == 0 else "b") + str(j // 2 + 1)
                parts.append(name if c == 1 else f"{c}{name}")
        return "+".join(parts) or "0"

    def __repr__(self):
        return f"ZlVector[{self.params.g},{self.params.L}]({self.label()})"


def index_to_coords(index: int, L: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, L)
        out.append(r)
    return tuple(out)


def coords_to_index(coords: Sequence[int], L: int) -> int:
    idx = 0
    for c in reversed(coords):
        idx = idx * L + c
    return idx


def _same_params(vectors: Sequence[ZlVector]) -> LatticeParams | None:
    if not vectors:
        return None
    p = vectors[0].params
    for v in vectors[1:]:
        if v.params != p:
            raise ParameterError(f"mismatched parameters {p} vs {v.params}")
    return p


def pairing_coords(x: Sequence[int], y: Sequence[int], L: int) -> int:
    s = 0
    for j in range(0, len(x), 2):
        s += x[j] * y[j + 1] - x[j + 1] * y[j]
    return s % L


def pairing(x: ZlVector, y: ZlVector) -> int:
    """Algebraic intersection number i(x, y) as a residue in [0, L)."""
    _same_params([x, y])
    return pairing_coords(x.coords, y.coords, x.params.L)


def is_isotropic(vectors: Iterable[ZlVector]) -> bool:
    vs = list(vectors)
    _same_params(vs)
    return all(pairing(x, y) == 0 for x, y in itertools.combinations(vs, 2))


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def minor_gcd(coord_rows: Sequence[Sequence[int]], L: int) -> int:
    """gcd of L and every maximal minor of the k x 2g integer lift."""
    k = len(coord_rows)
    n = len(coord_rows[0])
    g = L
    for cols in itertools.combinations(range(n), k):
        g = math.gcd(g, int_det([[r[c] for c in cols] for r in coord_rows]))
        if g == 1:
            return 1
    return g


def is_unimodular_coords(coord_rows: Sequence[Sequence[int]], L: int) -> bool:
    k = len(coord_rows)
    if k == 0:
        return True
    if k > len(coord_rows[0]):
        return False
    return minor_gcd(coord_rows, L) == 1


def is_unimodular(vectors: Iterable[ZlVector]) -> bool:
    """True iff the vectors span a free rank-k direct summand of (Z/L)^{2g}.

    Decided by the minor-gcd criterion: the k x k minors of the integer lift
    together with L must have gcd 1.
    """
    vs = list(vectors)
    if not vs:
        raise InputError("unimodularity needs at least one vector")
    params = _same_params(vs)
    if len(set(vs)) != len(vs):
        raise InputError("unimodular sets must consist of distinct vectors")
    if len(vs) > params.rank:
        return False
    return is_unimodular_coords([v.coords for v in vs], params.L)


def content(v: ZlVector) -> int:
    """The divisor c of L with v = c * (primitive vector); content(0) = L."""
    return math.gcd(v.params.L, *v.coords)


def tau(L: int) -> int:
    """Number of positive divisors of L."""
    if L < 1:
        raise InputError(f"tau needs L >= 1, got {L}")
    return int(divisor_count(L))


def _check_budget(params: LatticeParams, budget: int | None, what: str):
    budget = ENUMERATION_BUDGET if budget is None else budget
    if params.size > budget:
        raise BudgetExceeded(f"{what}: |H_L| = {params.size} exceeds budget {budget}")


def enumerate_vectors(params: LatticeParams, budget: int | None = None) -> list[ZlVector]:
    """All L^{2g} vectors in mixed-radix index order."""
    _check_budget(params, budget, "enumerate_vectors")
    return [ZlVector.from_index(params, i) for i in range(params.size)]


@lru_cache(maxsize=None)
def _iso_uni_pair_indices(params: LatticeParams) -> tuple[tuple[int, int], ...]:
    L, n = params.L, params.rank
    coords = [index_to_coords(i, L, n) for i in range(params.size)]
    primitive = [i for i, c in enumerate(coords) if math.gcd(L, *c) == 1]
    out = []
    for i in primitive:
        ci = coords[i]
        for j in primitive:
            if i == j:
                continue
            cj = coords[j]
            if pairing_coords(ci, cj, L) == 0 and is_unimodular_coords((ci, cj), L):
                out.append((i, j))
    return tuple(out)


def enumerate_iso_uni_pairs(params: LatticeParams, budget: int | None = None) -> list[tuple[ZlVector, ZlVector]]:
    """Ordered pairs (w1, w2) of distinct vectors that are isotropic and unimodular."""
    _check_budget(params, budget, "enumerate_iso_uni_pairs")
    return [(ZlVector.from_index(params, i), ZlVector.from_index(params, j))
            for i, j in _iso_uni_pair_indices(params)]


@dataclass(frozen=True)
class TransvectionGenerator:
    direction: ZlVector
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError(f"sign must be +1 or -1, got {self.sign}")
        if content(self.direction) != 1:
            raise InputError(f"transvection direction {self.direction!r} is not primitive")

    def __call__(self, x: ZlVector) -> ZlVector:
        return x + (self.sign * pairing(x, self.direction)) * self.direction


def transvections(params: LatticeParams) -> list[TransvectionGenerator]:
    return [TransvectionGenerator(d, s)
            for d in enumerate_vectors(params) if content(d) == 1
            for s in (1, -1)]


def sp_orbits(params: LatticeParams, budget: int | None = None) -> list[frozenset[int]]:
    """Orbits of the transvection group on H_L, as sets of vector indices."""
    budget = BFS_BUDGET if budget is None else budget
    if params.size > budget:
        raise BudgetExceeded(f"orbit BFS: |H_L| = {params.size} exceeds budget {budget}")
    L, n = params.L, params.rank
    coords = [index_to_coords(i, L, n) for i in range(params.size)]
    dirs = [c for c in coords if math.gcd(L, *c) == 1]
    seen = [False] * params.size
    orbits = []
    for start in range(params.size):
        if seen[start]:
            continue
        seen[start] = True
        orbit = {start}
        queue = deque([start])
        while queue:
            x = coords[queue.popleft()]
            for d in dirs:
                t = pairing_coords(x, d, L)
                if not t:
                    continue
                for s in (t, -t):
                    y = coords_to_index([(xi + s * di) % L for xi, di in zip(x, d)], L)
                    if not seen[y]:
                        seen[y] = True
                        orbit.add(y)
                        queue.append(y)
        orbits.append(frozenset(orbit))
    return orbits


def sp_orbit_count_bfs(params: LatticeParams, budget: int | None = None) -> int:
    """Number of Sp_{2g}(Z/L)-orbits on H_L by breadth-first transvection closure."""
    return len(sp_orbits(params, budget))
