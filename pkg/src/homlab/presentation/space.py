"""The presented space A_g, its relation templates, the V families and psi.

Generators X(v, w1, w2) are indexed ``v_index * n_pairs + pair_index``,
where pairs are the ordered isotropic unimodular pairs in lexicographic
order of (index(w1), index(w2)).  This is the lexicographic order of
(index(v), index(w1), index(w2)).

Every relation family is translation-closed, so it is stored as template
rows ``[(coef, offset, pair), ...]``; the row at v has entry ``coef`` at
X(v + offset, pair).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import BudgetExceeded, ConstructionError, InputError
from ..fox.cover import translation_table
from ..lattice import (LatticeParams, ZlVector, _iso_uni_pair_indices, coords_to_index, index_to_coords,
                       is_unimodular_coords, pairing_coords)
from ..linalg import SparseRationalMatrix
from ..linalg.equivariant import TemplateRows

#: cap on the number of generators X(v, w1, w2)
PRESENTATION_BUDGET = 250_000

FAMILIES = ("R1", "R2", "R3", "R4")


@dataclass(frozen=True)
class XGenerator:
    v: ZlVector
    w1: ZlVector
    w2: ZlVector
    index: int

    def __str__(self):
        return f"X({self.v.label()}, {self.w1.label()}, {self.w2.label()})"


class Presentation:
    """Generators and relation templates of A_g for one (g, L)."""

    def __init__(self, params: LatticeParams, budget: int | None = None):
        budget = PRESENTATION_BUDGET if budget is None else budget
        self.params = params
        L, n, N = params.L, params.rank, params.size
        if N * N > 64 * budget:
            raise BudgetExceeded(f"|H_L| = {N} too large for the presentation")
        self.pairs: tuple[tuple[int, int], ...] = _iso_uni_pair_indices(params)
        if N * len(self.pairs) > budget:
            raise BudgetExceeded(f"{N * len(self.pairs)} generators exceed budget {budget}")
        self.pair_index = {p: k for k, p in enumerate(self.pairs)}
        self.coords = [index_to_coords(i, L, n) for i in range(N)]
        self.add_table = translation_table(params)

    # -- vector arithmetic on indices ------------------------------------
    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_generators(self) -> int:
        return self.params.size * len(self.pairs)

    def add(self, *idx: int) -> int:
        out = 0
        for i in idx:
            out = int(self.add_table[out, i])
        return out

    def smul(self, k: int, i: int) -> int:
        L = self.params.L
        return coords_to_index([(k * c) % L for c in self.coords[i]], L)

    def neg(self, i: int) -> int:
        return self.smul(-1, i)

    def lincomb(self, *terms: tuple[int, int]) -> int:
        """Index of sum k * x over (k, x) pairs."""
        return self.add(*(self.smul(k, x) for k, x in terms))

    def pair_form(self, i: int, j: int) -> int:
        return pairing_coords(self.coords[i], self.coords[j], self.params.L)

    def basis(self, j: int) -> int:
        """Index of the j-th basis vector in the order a1, b1, ..., ag, bg."""
        return self.params.L ** j

    def a(self, i: int) -> int:
        return self.basis(2 * (i - 1))

    def b(self, i: int) -> int:
        return self.basis(2 * (i - 1) + 1)

    # -- generators -------------------------------------------------------
    def column(self, v: int, w1: int, w2: int) -> int:
        k = self.pair_index.get((w1, w2))
        if k is None:
            raise ConstructionError(f"X({self.label(v)}, {self.label(w1)}, {self.label(w2)}) is not a generator")
        return v * self.n_pairs + k

    def has_generator(self, w1: int, w2: int) -> bool:
        return (w1, w2) in self.pair_index

    def split(self, col: int) -> tuple[int, int, int]:
        v, k = divmod(col, self.n_pairs)
        w1, w2 = self.pairs[k]
        return v, w1, w2

    def generator(self, col: int) -> XGenerator:
        if not 0 <= col < self.n_generators:
            raise InputError(f"generator index {col} out of range {self.n_generators}")
        v, w1, w2 = self.split(col)
        f = lambda i: ZlVector.from_index(self.params, i)
        return XGenerator(f(v), f(w1), f(w2), col)

    def column_of(self, x: XGenerator | tuple) -> int:
        v, w1, w2 = (x.v, x.w1, x.w2) if isinstance(x, XGenerator) else x
        return self.column(v.index, w1.index, w2.index)

    def label(self, i: int) -> str:
        return ZlVector.from_index(self.params, i).label()

    def describe(self, col: int) -> str:
        return str(self.generator(col))

    # -- relations ----------------------------------------------------------
    @cached_property
    def templates(self) -> dict[str, list[list[tuple[int, int, int]]]]:
        """Relation templates by family; every referenced pair is validated."""
        L = self.params.L
        N = self.params.size
        pk = self.pair_index

        def ref(w1, w2):
            k = pk.get((w1, w2))
            if k is None:
                raise ConstructionError(
                    f"relation references invalid generator pair ({self.label(w1)}, {self.label(w2)})")
            return k

        out = {f: [] for f in FAMILIES}
        for (w1, w2), k in pk.items():
            out["R1"].append([(1, 0, k), (-1, 0, ref(w2, w1))])
            out["R2"].append([(1, 0, ref(self.neg(w1), w2)), (1, self.neg(w1), k)])
            out["R3"].append([(1, self.smul(i, w1), k) for i in range(L)])
            c1, c2 = self.coords[w1], self.coords[w2]
            for w3 in range(1, N):
                c3 = self.coords[w3]
                if pairing_coords(c2, c3, L) != 0 or pairing_coords(c1, c3, L) not in (0, 1, L - 1):
                    continue
                if w3 in (w1, w2) or not is_unimodular_coords((c1, c2, c3), L):
                    continue
                out["R4"].append([(1, 0, ref(self.add(w1, w3), w2)), (-1, 0, k), (-1, w1, ref(w3, w2))])
        return out

    def template_rows(self, families=FAMILIES) -> TemplateRows:
        return TemplateRows([t for f in families for t in self.templates[f]])

    def instantiate(self, template, v: int) -> dict[int, int]:
        """The row of a template at base point v, duplicates merged."""
        row: dict[int, int] = {}
        for c, off, k in template:
            col = int(self.add_table[v, off]) * self.n_pairs + k
            row[col] = row.get(col, 0) + c
        return {col: c for col, c in row.items() if c}

    def relation_count(self, family: str | None = None) -> int:
        fams = FAMILIES if family is None else (family,)
        return self.params.size * sum(len(self.templates[f]) for f in fams)

    def relation_rows(self, families=FAMILIES, budget: int | None = None):
        """Materialize relation rows as ((family, template, v), row) pairs."""
        total = sum(self.params.size * len(self.templates[f]) for f in families)
        if budget is not None and total > budget:
            raise BudgetExceeded(f"{total} relation rows exceed budget {budget}")
        for f in families:
            for t, tpl in enumerate(self.templates[f]):
                for v in range(self.params.size):
                    yield (f, t, v), self.instantiate(tpl, v)

    def relation_table(self, family: str, budget: int | None = None) -> "RelationTable":
        rows = [row for _, row in self.relation_rows((family,), budget)]
        return RelationTable(family, self.n_generators, rows)

    # -- psi ------------------------------------------------------------------
    def psi_column(self, col: int) -> dict[int, int]:
        """rho[v] - rho[v+w1] - rho[v+w2] + rho[v+w1+w2] in B_g coordinates."""
        v, w1, w2 = self.split(col)
        T = self.add_table
        out: dict[int, int] = {}
        for idx, s in ((v, 1), (int(T[v, w1]), -1), (int(T[v, w2]), -1), (int(T[T[v, w1], w2]), 1)):
            out[idx] = out.get(idx, 0) + s
        return {k: c for k, c in out.items() if c}

    def psi_vector(self, vec: dict[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for col, c in vec.items():
            for k, s in self.psi_column(col).items():
                out[k] = out.get(k, 0) + c * s
        return {k: c for k, c in out.items() if c}

    def psi_matrix(self, columns) -> SparseRationalMatrix:
        return psi_matrix(self, columns)


@dataclass
class RelationTable:
    family: str
    ncols: int
    rows: list[dict[int, int]]

    _SHAPES = {"R1": lambda L: [-1, 1], "R2": lambda L: [1, 1], "R3": lambda L: [1] * L,
               "R4": lambda L: [-1, -1, 1]}

    def shape_ok(self, L: int) -> bool:
        """Whether every row has the coefficient pattern of its family."""
        want = self._SHAPES[self.family](L)
        return all(sorted(r.values()) == want for r in self.rows)

    def to_matrix(self) -> SparseRationalMatrix:
        return SparseRationalMatrix.from_rows(self.ncols, self.rows)


def enumerate_generators(pres: Presentation) -> list[XGenerator]:
    return [pres.generator(c) for c in range(pres.n_generators)]


def enumerate_relations(pres: Presentation, budget: int | None = None) -> dict[str, RelationTable]:
    return {f: pres.relation_table(f, budget) for f in FAMILIES}


def psi_matrix(pres: Presentation, columns) -> SparseRationalMatrix:
    cols = [pres.psi_column(c) for c in columns]
    return SparseRationalMatrix.from_columns(pres.params.size, cols)


def psi_of_templates(pres: Presentation, templates) -> list[int]:
    """Indices of templates whose psi image is nonzero at some base point.

    All base points are evaluated at once: for each template we accumulate
    an (N x N) table whose row v is psi of the row at v.
    """
    T = pres.add_table
    N = pres.params.size
    base = np.arange(N)
    bad = []
    for t, tpl in enumerate(templates):
        acc = np.zeros((N, N), dtype=np.int64)
        for c, off, k in tpl:
            w1, w2 = pres.pairs[k]
            v = T[base, off]
            for idx, s in ((v, 1), (T[v, w1], -1), (T[v, w2], -1), (T[T[v, w1], w2], 1)):
                np.add.at(acc, (base, idx), c * s)
        if acc.any():
            bad.append(t)
    return bad


# -- the V families -------------------------------------------------------------------

@dataclass
class VCatalog:
    """Generator columns of every V family and index sets of B^1, B^2, B^3.

    ``labels`` holds the pair labels of the translation-closed families
    (those containing X(v, w1, w2) for every v).
    """
    families: dict[str, list[int]] = field(default_factory=dict)
    labels: dict[str, list[int]] = field(default_factory=dict)
    subspaces: dict[str, list[int]] = field(default_factory=dict)

    def __getitem__(self, name: str) -> list[int]:
        return self.families[name]

    def union(self, *names: str) -> list[int]:
        return sorted(set().union(*(self.families[n] for n in names)))


def _closed(pres: Presentation, pair_labels) -> list[int]:
    m = pres.n_pairs
    return [v * m + k for v in range(pres.params.size) for k in sorted(pair_labels)]


def y_partner(pres: Presentation, s: int) -> int:
    """The first basis vector s'' != s with i(s, s'') = 0, fixing the lift Y(v, s) = X(v, s, s + s'')."""
    for j in range(pres.params.rank):
        t = pres.basis(j)
        if t != s and pres.pair_form(s, t) == 0:
            return t
    raise InputError("Y(v, s) needs g >= 2")


def enumerate_V(pres: Presentation) -> VCatalog:
    """V1, V2, V3 from the standard basis, plus the subfamilies used in the injectivity proofs."""
    p = pres.params
    g, L = p.g, p.L
    B = [pres.basis(j) for j in range(p.rank)]
    es = sorted({1, L - 1})
    form = pres.pair_form
    labels: dict[str, set[int]] = {k: set() for k in ("V1", "V2", "V3", "V1^I", "V1^A", "V1^B")}
    for s1, s2 in itertools.permutations(B, 2):
        if form(s1, s2):
            continue
        k = pres.pair_index[(s1, s2)]
        labels["V1"].add(k)
        if s1 not in B[-2:] and s2 not in B[-2:]:
            labels["V1^I"].add(k)
        if s1 == B[-2]:
            labels["V1^A"].add(k)
        if s1 == B[-1]:
            labels["V1^B"].add(k)
        for e in es:
            labels["V2"].add(pres.pair_index[(s1, pres.lincomb((1, s1), (e, s2)))])
    for s1, s2, s3, s4 in itertools.permutations(B, 4):
        if form(s1, s3) != 1:
            continue
        for e in es:
            for e2 in es:
                x, y = pres.lincomb((1, s1), (e, s2)), pres.lincomb((1, s3), (e2, s4))
                if form(x, y) == 0:
                    labels["V3"].add(pres.pair_index[(x, y)])
    cat = VCatalog()
    for name, ks in labels.items():
        cat.labels[name] = sorted(ks)
        cat.families[name] = _closed(pres, ks)

    col = pres.column
    fam = {k: set() for k in ("V1^A1", "V1^A2", "V1^A3", "V1^B1", "V1^B2", "V1^B3")}
    R = range(L)
    if g >= 2:
        ag, bg = pres.a(g), pres.b(g)
        for i in range(1, g):
            ai, bi = pres.a(i), pres.b(i)
            for c, d, e, f in itertools.product(R, R, R, R):
                v = pres.lincomb((c, ai), (d, bi), (e, ag), (f, bg))
                for s in (ai, bi):
                    fam["V1^A1"].add(col(v, ag, s))
                fam["V1^A2"].add(col(v, ag, ai))
                if c != L - 1 and e != L - 1:
                    fam["V1^A3"].add(col(v, ag, ai))
                if c == 0:
                    fam["V1^A2"].add(col(v, ag, bi))
                    if d != L - 1 and e != L - 1:
                        fam["V1^A3"].add(col(v, ag, bi))
            for c, d, f in itertools.product(R, R, R):
                v = pres.lincomb((c, ai), (d, bi), (f, bg))
                for s in (ai, bi):
                    fam["V1^B1"].add(col(v, bg, s))
                fam["V1^B2"].add(col(v, bg, ai))
                if c != L - 1 and f != L - 1:
                    fam["V1^B3"].add(col(v, bg, ai))
                if c == 0:
                    fam["V1^B2"].add(col(v, bg, bi))
                    if d != L - 1 and f != L - 1:
                        fam["V1^B3"].add(col(v, bg, bi))
    for name, cols in fam.items():
        cat.families[name] = sorted(cols)

    # B^1, B^2, B^3 as sets of basis indices of B_g
    b1, b2, b3 = set(), set(), set()
    ag, bg = pres.a(g), pres.b(g)
    for e, f in itertools.product(R, R):
        b2.add(pres.lincomb((e, ag), (f, bg)))
        b3.add(pres.lincomb((e, ag), (f, bg)))
    for i in range(1, g + 1):
        ai, bi = pres.a(i), pres.b(i)
        for c, d in itertools.product(R, R):
            b1.add(pres.lincomb((c, ai), (d, bi)))
            if i < g:
                for e, f in itertools.product(R, R):
                    b2.add(pres.lincomb((c, ai), (d, bi), (e, ag), (f, bg)))
                for f in R:
                    b3.add(pres.lincomb((c, ai), (d, bi), (f, bg)))
    cat.subspaces = {"B1": sorted(b1), "B2": sorted(b2), "B3": sorted(b3)}
    return cat


def filter_V(pres: Presentation) -> dict[str, list[int]]:
    """V1, V2, V3 pair labels re-derived by testing every generator pair against the defining conditions."""
    p = pres.params
    L = p.L
    B = [pres.basis(j) for j in range(p.rank)]
    es = {1, L - 1}
    form = pres.pair_form
    out = {"V1": [], "V2": [], "V3": []}
    for k, (w1, w2) in enumerate(pres.pairs):
        if w1 in B and w2 in B and form(w1, w2) == 0:
            out["V1"].append(k)
        if any(s1 != s2 and form(s1, s2) == 0 and w1 == s1 and w2 == pres.lincomb((1, s1), (e, s2))
               for s1 in B for s2 in B for e in es):
            out["V2"].append(k)
        hit = False
        for s1, s2, s3, s4 in itertools.permutations(B, 4):
            if form(s1, s3) != 1:
                continue
            for e in es:
                for e2 in es:
                    x, y = pres.lincomb((1, s1), (e, s2)), pres.lincomb((1, s3), (e2, s4))
                    if form(x, y) == 0 and (w1, w2) == (x, y):
                        hit = True
        if hit:
            out["V3"].append(k)
    return out
