"""Machine checks of the relations, lemmas and claims about A_g, V and psi.

Every check is stated as an exact membership, rank or quotient-dimension
assertion in the free module on the generators (for A_g) or in B_g.  A
``Workspace`` owns the presentation of one (g, L) and hands out private
copies of relation spans, so checks can run in parallel.
"""
from __future__ import annotations

import random
import threading
import time
from fractions import Fraction
from typing import Callable

from ..errors import BudgetExceeded, InconsistencyError, InputError
from ..lattice import (LatticeParams, ZlVector, enumerate_vectors, is_isotropic, is_unimodular,
                       is_unimodular_coords, transvections)
from ..linalg import EXACT, MODULAR, Span, rank
from ..linalg.matrix import SparseRationalMatrix
from ..report import PASS, Check, count_check, make_check, skipped
from .space import FAMILIES, Presentation, enumerate_V, filter_V, psi_of_templates, y_partner
from .spans import BlockFreeSpan, ExactFreeSpan, NotTranslationClosed

#: hybrid mode eliminates exactly up to this many generator columns
EXACT_COL_CAP = 20_000
NEWRELATION1_SAMPLES = 100
NEWRELATION2_QUADRUPLES = 4


class Workspace:
    def __init__(self, params: LatticeParams, mode: str = "hybrid", seed: int = 0,
                 exact_col_cap: int = EXACT_COL_CAP, budget: int | None = None):
        if mode not in ("exact", "modular", "hybrid"):
            raise InputError(f"unknown mode {mode!r}")
        self.params = params
        self.seed = seed
        self.pres = Presentation(params, budget)
        self.catalog = enumerate_V(self.pres)
        n = self.pres.n_generators
        if mode == MODULAR:
            self.span_mode = MODULAR
        elif n <= exact_col_cap:
            self.span_mode = EXACT
        else:
            self.span_mode = MODULAR if mode == "hybrid" else None
        self._cap = exact_col_cap
        self._lock = threading.RLock()
        self._spans: dict[tuple, object] = {}

    @property
    def exact(self) -> bool:
        return self.span_mode == EXACT

    def _new_engine(self):
        if self.span_mode is None:
            raise BudgetExceeded(f"{self.pres.n_generators} generator columns exceed the exact cap {self._cap}")
        if self.span_mode == EXACT:
            return ExactFreeSpan(self.pres)
        return BlockFreeSpan(self.pres, seed=self.seed)

    def add_family(self, span, name: str) -> int:
        if name in self.catalog.labels:
            return span.add_labels(self.catalog.labels[name])
        return span.add_columns(self.catalog[name])

    def span(self, *families: str):
        """A private copy of the span of all relation rows and the named V families."""
        key = tuple(sorted(set(families)))
        with self._lock:
            if key not in self._spans:
                if key:
                    s = self.span()
                    for name in key:
                        self.add_family(s, name)
                else:
                    s = self._new_engine()
                    s.add_relations()
                self._spans[key] = s
            return self._spans[key].copy()

    def quotient_dim(self, families, modulo=()) -> tuple[int, object]:
        """dim of span(families) modulo span(R, modulo), with the engine used."""
        s = self.span(*modulo)
        gain = 0
        for name in families:
            gain += self.add_family(s, name)
        return gain, s

    def meta(self, span) -> dict:
        return {"certification": span.mode, "primes": list(span.primes)}

    # -- B_g helpers ---------------------------------------------------------------
    def psi_columns(self, names) -> list[dict[int, int]]:
        cols = sorted(set().union(*(self.catalog[n] for n in names))) if names else []
        return [self.pres.psi_column(c) for c in cols]

    def b_rank(self, vectors) -> int:
        vecs = [v for v in vectors if v]
        if not vecs:
            return 0
        return rank(SparseRationalMatrix.from_columns(self.params.size, vecs)).rank

    def units(self, subspace: str) -> list[dict[int, int]]:
        return [{b: 1} for b in self.catalog.subspaces[subspace]]


def _timed(name: str, fn: Callable[[], Check | list[Check]]) -> list[Check]:
    t = time.perf_counter()
    try:
        out = fn()
    except (BudgetExceeded, NotTranslationClosed) as exc:
        out = skipped(name, str(exc))
    out = out if isinstance(out, list) else [out]
    ms = int((time.perf_counter() - t) * 1000)
    for c in out:
        c.millis = ms
    return out


def _collect(items) -> list[Check]:
    out = []
    for name, fn in items:
        out.extend(_timed(name, fn))
    return out


def _vacuous(name: str, params: LatticeParams) -> Check:
    return make_check(name, "vacuous", "vacuous", witnesses=[f"g = {params.g} < 2: no generators"])


def _b_span(ws: Workspace, cols: list[dict[int, int]]) -> tuple[Span, dict]:
    span = Span(ws.params.size, EXACT)
    store = {}
    for k, c in enumerate(cols):
        if c:
            store[k] = c
            span.add(c, k)
    return span, store


def _b_member(span: Span, store: dict, vec: dict) -> bool:
    """Exact membership in B_g with the certificate re-multiplied."""
    res = span.contains(vec)
    if not res.member:
        return False
    total: dict[int, Fraction] = {}
    for k, c in res.coefficients.items():
        for b, x in store[k].items():
            total[b] = total.get(b, 0) + c * x
    if {b: x for b, x in total.items() if x} != {b: Fraction(x) for b, x in vec.items() if x}:
        raise InconsistencyError("B_g membership certificate failed exact re-verification")
    return True


def _lin(pres: Presentation, terms) -> dict[int, int]:
    """Free-module vector of sum coef * X(v, w1, w2) over (coef, v, w1, w2) terms."""
    out: dict[int, int] = {}
    for c, v, w1, w2 in terms:
        col = pres.column(v, w1, w2)
        out[col] = out.get(col, 0) + c
    return {k: c for k, c in out.items() if c}


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


# -- generators, relations and V families ----------------------------------------------

def verify_presentation(ws: Workspace) -> list[Check]:
    pres, p = ws.pres, ws.params
    cat = ws.catalog
    L, g = p.L, p.g

    def count():
        vecs = enumerate_vectors(p)
        n_pairs = sum(1 for x in vecs for y in vecs
                      if x != y and is_isotropic([x, y]) and is_unimodular([x, y]))
        return make_check("presentation.generators.count", p.size * n_pairs, pres.n_generators)

    def order():
        keys = [(v, w1, w2) for v in range(p.size) for w1, w2 in pres.pairs]
        bad = [c for c in range(0, pres.n_generators, max(1, pres.n_generators // 5000))
               if pres.column(*pres.split(c)) != c]
        ok = keys == sorted(keys) and not bad
        return make_check("presentation.generators.lex-order", True, ok, witnesses=bad)

    def counts():
        got = {f: pres.relation_count(f) for f in FAMILIES}
        n = pres.n_generators
        return make_check("presentation.relations.counts", {"R1": n, "R2": n, "R3": n},
                          {f: got[f] for f in ("R1", "R2", "R3")})

    def shape():
        if ws.exact:
            bad = [f for f in FAMILIES if not pres.relation_table(f).shape_ok(L)]
        else:
            # translation permutes columns, so the pattern at v = 0 is the pattern at every v
            bad = [f for f in FAMILIES
                   if any(sorted(pres.instantiate(t, 0).values()) != _shape(f, L) for t in pres.templates[f])]
        return make_check("presentation.relations.shape", [], bad)

    def psi_zero():
        tpl = [(f, k, t) for f in FAMILIES for k, t in enumerate(pres.templates[f])]
        bad = psi_of_templates(pres, [t for _, _, t in tpl])
        return count_check("presentation.relations.psi-annihilates", len(tpl) * p.size,
                           [f"{tpl[i][0]}#{tpl[i][1]}" for i in bad])

    def partition():
        got = filter_V(pres)
        return make_check("presentation.vsets.partition", {k: got[k] for k in got},
                          {k: cat.labels[k] for k in got})

    def sizes():
        exp = {"V1^A3": (g - 1) * (L * L * (L - 1) ** 2 + L * (L - 1) ** 2),
               "V1^B3": (g - 1) * ((L - 1) ** 2 * L + (L - 1) ** 2)}
        return make_check("presentation.vsets.pruned-counts", exp, {k: len(cat[k]) for k in exp})

    def chains():
        f = {k: set(v) for k, v in cat.families.items()}
        ok = (f["V1^A3"] <= f["V1^A2"] <= f["V1^A1"] <= f["V1^A"]
              and f["V1^B3"] <= f["V1^B2"] <= f["V1^B1"] <= f["V1^B"]
              and f["V1^I"] | f["V1^A"] | f["V1^B"] <= f["V1"])
        return make_check("presentation.vsets.nested", True, ok)

    def cover():
        # V1^I, V1^A, V1^B fix the first slot; the rest of V1 is reached through R1
        got = set(cat.labels["V1^I"]) | set(cat.labels["V1^A"]) | set(cat.labels["V1^B"])
        swapped = {pres.pair_index[(w2, w1)] for k in got for w1, w2 in [pres.pairs[k]]}
        missing = sorted(set(cat.labels["V1"]) - got - swapped)
        return make_check("presentation.vsets.v1-cover-mod-r1", [], missing)

    def bdims():
        exp = {"B1": g * (L * L - 1) + 1, "B2": (g - 1) * (L * L - 1) * L * L + L * L,
               "B3": (g - 1) * (L * L - 1) * L + L * L}
        return make_check("presentation.bsubspaces.dims", exp, {k: len(v) for k, v in cat.subspaces.items()})

    return _collect([
        ("presentation.generators.count", count), ("presentation.generators.lex-order", order),
        ("presentation.relations.counts", counts), ("presentation.relations.shape", shape),
        ("presentation.relations.psi-annihilates", psi_zero), ("presentation.vsets.partition", partition),
        ("presentation.vsets.pruned-counts", sizes), ("presentation.vsets.nested", chains),
        ("presentation.vsets.v1-cover-mod-r1", cover), ("presentation.bsubspaces.dims", bdims),
    ])


def _shape(family: str, L: int) -> list[int]:
    return {"R1": [-1, 1], "R2": [1, 1], "R3": [1] * L, "R4": [-1, -1, 1]}[family]


# -- counting identities ----------------------------------------------------------------

def dim_b1(g: int, L: int) -> int:
    return g * (L * L - 1) + 1


def dim_b2(g: int, L: int) -> int:
    return (g - 1) * (L * L - 1) * L * L + L * L


def dim_b3(g: int, L: int) -> int:
    return (g - 1) * (L * L - 1) * L + L * L


def counting_identities(g_max: int = 6, L_max: int = 12) -> list[Check]:
    """The three dimension counts of the injectivity proofs, as integer identities."""
    grid = [(g, L) for g in range(1, g_max + 1) for L in range(2, L_max + 1)]
    step2 = [f"g={g} L={L}" for g, L in grid
             if (g - 1) * (L * L * (L - 1) ** 2 + L * (L - 1) ** 2) != dim_b2(g, L) - dim_b3(g, L)]
    step3 = [f"g={g} L={L}" for g, L in grid
             if (g - 1) * ((L - 1) ** 2 * L + (L - 1) ** 2) != dim_b3(g, L) - dim_b1(g, L)]
    final = [f"g={g} L={L}" for g, L in grid
             if g * (L * (L - 1) + L - 1) != g * (L * L - 1) or g * (L * L - 1) != dim_b1(g, L) - 1]
    return [count_check("counting.step2", len(grid), step2),
            count_check("counting.step3", len(grid), step3),
            count_check("counting.final", len(grid), final)]


# -- Lemma: psi is injective on span V1 ------------------------------------------------------

def verify_v1injective(ws: Workspace) -> list[Check]:
    p = ws.params
    N, g, L = p.size, p.g, p.L
    cat = ws.catalog
    pre = "lemma.v1injective"

    def rank_v1():
        return make_check(f"{pre}.rank-psi-v1", N - g * (L * L - 1) - 1, ws.b_rank(ws.psi_columns(["V1"])))

    def direct_sum():
        r = ws.b_rank(ws.psi_columns(["V1"]))
        both = ws.b_rank(ws.psi_columns(["V1"]) + ws.units("B1"))
        return make_check(f"{pre}.direct-sum", {"rank": N, "sum": N},
                          {"rank": both, "sum": r + len(cat.subspaces["B1"])},
                          witnesses=[f"rank psi(V1)={r}", f"dim B1={len(cat.subspaces['B1'])}"])

    def injective(name, fams):
        def run():
            q, s = ws.quotient_dim(fams)
            r = ws.b_rank(ws.psi_columns(fams))
            return make_check(name, r, q, **ws.meta(s))
        return run

    def split(name, fams, sub):
        def run():
            r = ws.b_rank(ws.psi_columns(fams))
            both = ws.b_rank(ws.psi_columns(fams) + ws.units(sub))
            d = len(cat.subspaces[sub])
            return make_check(name, {"rank": N, "sum": N}, {"rank": both, "sum": r + d})
        return run

    def same_span(name, big, small):
        def run():
            qb, s = ws.quotient_dim(big)
            qs, _ = ws.quotient_dim(small)
            return make_check(name, qb, qs, **ws.meta(s))
        return run

    def count(name, fam, lhs, rhs):
        def run():
            return make_check(name, {"size": lhs, "dim_difference": lhs}, {"size": len(cat[fam]), "dim_difference": rhs})
        return run

    items = [(f"{pre}.rank-psi-v1", rank_v1), (f"{pre}.direct-sum", direct_sum),
             (f"{pre}.injective", injective(f"{pre}.injective", ["V1"]))]
    if g >= 2:
        nA = (g - 1) * (L * L * (L - 1) ** 2 + L * (L - 1) ** 2)
        nB = (g - 1) * ((L - 1) ** 2 * L + (L - 1) ** 2)
        items += [
            (f"{pre}.cover-mod-r1", same_span(f"{pre}.cover-mod-r1", ["V1"], ["V1^I", "V1^A", "V1^B"])),
            (f"{pre}.step1.injective", injective(f"{pre}.step1.injective", ["V1^I"])),
            (f"{pre}.step1.direct-sum", split(f"{pre}.step1.direct-sum", ["V1^I"], "B2")),
            (f"{pre}.step2.reduce-a1", same_span(f"{pre}.step2.reduce-a1", ["V1^I", "V1^A"], ["V1^I", "V1^A1"])),
            (f"{pre}.step2.reduce-a3", same_span(f"{pre}.step2.reduce-a3", ["V1^A1"], ["V1^A3"])),
            (f"{pre}.step2.count", count(f"{pre}.step2.count", "V1^A3", nA, dim_b2(g, L) - dim_b3(g, L))),
            (f"{pre}.step2.direct-sum", split(f"{pre}.step2.direct-sum", ["V1^I", "V1^A3"], "B3")),
            (f"{pre}.step2.injective", injective(f"{pre}.step2.injective", ["V1^I", "V1^A"])),
            (f"{pre}.step3.reduce-b1", same_span(f"{pre}.step3.reduce-b1", ["V1^I", "V1^A", "V1^B"],
                                                 ["V1^I", "V1^A", "V1^B1"])),
            (f"{pre}.step3.reduce-b3", same_span(f"{pre}.step3.reduce-b3", ["V1^B1"], ["V1^B3"])),
            (f"{pre}.step3.count", count(f"{pre}.step3.count", "V1^B3", nB, dim_b3(g, L) - dim_b1(g, L))),
            (f"{pre}.step3.direct-sum", split(f"{pre}.step3.direct-sum", ["V1^I", "V1^A3", "V1^B3"], "B1")),
            (f"{pre}.step3.injective", injective(f"{pre}.step3.injective", ["V1^I", "V1^A", "V1^B"])),
        ]
    return _collect(items)


# -- Lemma newrelation1 --------------------------------------------------------------------

def _nr1_vectors(pres: Presentation, v: int, s1: int, s2: int, s3: int) -> tuple[dict, dict, dict]:
    """(first relation at v, second relation at v, first relation at v - s1) as LHS - RHS."""
    add, neg = pres.add, pres.neg

    def first(u):
        return _lin(pres, [(1, u, s2, s3), (-1, add(u, s1), s2, s3), (-1, u, s1, s3), (1, add(u, s2), s1, s3)])
    second = _lin(pres, [(1, add(v, neg(s1)), s2, s3), (-1, v, s2, s3), (-1, add(v, neg(s1)), s1, s3),
                         (1, add(v, neg(s1), s2), s1, s3)])
    return first(v), second, first(add(v, neg(s1)))


def _nr1_admissible(pres: Presentation, s1: int, s2: int, s3: int) -> bool:
    L = pres.params.L
    f = pres.pair_form
    if len({s1, s2, s3}) < 3 or f(s1, s3) or f(s2, s3) or f(s1, s2) not in (0, 1, L - 1):
        return False
    return is_unimodular_coords([pres.coords[s] for s in (s1, s2, s3)], L)


def newrelation1_triples(pres: Presentation) -> list[tuple[int, int, int]]:
    N = pres.params.size
    return [(s1, s2, s3) for s3 in range(1, N) for s1 in range(1, N) for s2 in range(1, N)
            if _nr1_admissible(pres, s1, s2, s3)]


def verify_newrelation1(ws: Workspace, sample: int | None = None) -> list[Check]:
    """Exhaustive over admissible (v, s1, s2, s3) with the exact engine, else seeded samples."""
    pres, p = ws.pres, ws.params
    pre = "lemma.newrelation1"
    if p.g < 2:
        return [_vacuous(f"{pre}.exhaustive", p)]
    if ws.exact and sample is None:
        def run():
            span = ws.span()
            bad, subst, total = [], [], 0
            for s1, s2, s3 in newrelation1_triples(pres):
                for v in range(p.size):
                    total += 1
                    rel, second, shifted = _nr1_vectors(pres, v, s1, s2, s3)
                    if second != shifted:
                        subst.append(f"v={v} s=({s1},{s2},{s3})")
                    if not span.contains(rel):
                        bad.append(f"v={pres.label(v)} s1={pres.label(s1)} s2={pres.label(s2)} s3={pres.label(s3)}")
            return [count_check(f"{pre}.exhaustive", total, bad, certificates=span.certificates),
                    count_check(f"{pre}.substitution", total, subst)]
        return _collect([(f"{pre}.exhaustive", run)])

    def run_samples():
        span = ws.span()
        rng = random.Random(f"newrelation1:{ws.seed}:{p.g}:{p.L}")
        N = p.size
        out, subst = [], []
        for k in range(NEWRELATION1_SAMPLES if sample is None else sample):
            while True:
                s1, s2, s3 = (rng.randrange(1, N) for _ in range(3))
                if _nr1_admissible(pres, s1, s2, s3):
                    break
            v = rng.randrange(N)
            rel, second, shifted = _nr1_vectors(pres, v, s1, s2, s3)
            if second != shifted:
                subst.append(f"sample-{k}")
            before = span.certificates
            ok = span.contains(rel)
            out.append(make_check(f"{pre}.sample-{k}", True, ok, certificates=span.certificates - before,
                                  witnesses=[f"v={pres.label(v)} s1={pres.label(s1)} s2={pres.label(s2)} "
                                             f"s3={pres.label(s3)}"], **ws.meta(span)))
        out.append(count_check(f"{pre}.substitution", len(out), subst))
        return out
    return _collect([(f"{pre}.samples", run_samples)])


# -- Lemma eliminatev3 ------------------------------------------------------------------------

def verify_eliminatev3(ws: Workspace) -> list[Check]:
    pres, p = ws.pres, ws.params
    pre = "lemma.eliminatev3"
    if p.g < 2:
        return [_vacuous(f"{pre}.members", p)]

    def members():
        span = ws.span("V1", "V2")
        if ws.exact:
            cols = ws.catalog["V3"]
        else:
            # the span is translation-closed, so X(0, P) decides X(v, P) for every v
            cols = ws.catalog.labels["V3"]
        bad = [pres.describe(c) for c in cols if not span.contains({c: 1})]
        return count_check(f"{pre}.members", len(cols), bad, certificates=span.certificates, **ws.meta(span))

    def quotient():
        qv, s = ws.quotient_dim(["V1", "V2", "V3"])
        q12, _ = ws.quotient_dim(["V1", "V2"])
        return make_check(f"{pre}.quotient", qv, q12, **ws.meta(s))

    return _collect([(f"{pre}.members", members), (f"{pre}.quotient", quotient)])


# -- Lemma newrelation2 ----------------------------------------------------------------------

def newrelation2_quadruples(ws: Workspace, count: int = NEWRELATION2_QUADRUPLES) -> list[tuple[int, int, int, int]]:
    """The standard quadruple (a1, b1, a2, b2) followed by seeded transvected images."""
    p = ws.params
    std = [ZlVector.a(p, 1), ZlVector.b(p, 1), ZlVector.a(p, 2), ZlVector.b(p, 2)]
    quads = [tuple(x.index for x in std)]
    rng = random.Random(f"newrelation2:{ws.seed}:{p.g}:{p.L}")
    gens = transvections(p)
    while len(quads) < count:
        q = list(std)
        for _ in range(3):
            t = rng.choice(gens)
            q = [t(x) for x in q]
        key = tuple(x.index for x in q)
        if key not in quads:
            quads.append(key)
    return quads


def _nr2_sides(pres: Presentation, v: int, a1: int, b1: int, a2: int, b2: int) -> tuple[dict, dict]:
    add = pres.add
    lhs = _lin(pres, [(1, v, a1, a2), (-1, add(v, b1), a1, a2), (-1, add(v, b2), a1, a2), (1, add(v, b1, b2), a1, a2)])
    rhs = _lin(pres, [(1, v, b1, b2), (-1, add(v, a1), b1, b2), (-1, add(v, a2), b1, b2), (1, add(v, a1, a2), b1, b2)])
    return lhs, rhs


def verify_newrelation2(ws: Workspace, quadruples: int = NEWRELATION2_QUADRUPLES) -> list[Check]:
    pres, p = ws.pres, ws.params
    pre = "lemma.newrelation2"
    if p.g < 2:
        return [_vacuous(f"{pre}.membership", p)]
    quads = newrelation2_quadruples(ws, quadruples)

    def hypotheses():
        f = pres.pair_form
        bad = []
        for a1, b1, a2, b2 in quads:
            ok = (f(a1, b1) == 1 and f(a2, b2) == 1 and not any(f(x, y) for x in (a1, b1) for y in (a2, b2))
                  and len({a1, b1, a2, b2}) == 4
                  and is_unimodular_coords([pres.coords[x] for x in (a1, b1, a2, b2)], p.L))
            if not ok:
                bad.append(str((a1, b1, a2, b2)))
        return count_check(f"{pre}.quadruples", len(quads), bad)

    def membership():
        span = ws.span()
        bad, total = [], 0
        for q in quads:
            for v in range(p.size):
                total += 1
                lhs, rhs = _nr2_sides(pres, v, *q)
                if not span.contains(_sub(lhs, rhs)):
                    bad.append(f"quadruple={[pres.label(x) for x in q]} v={pres.label(v)}")
        return count_check(f"{pre}.membership", total, bad, certificates=span.certificates, **ws.meta(span))

    def psi_route():
        bad, total = [], 0
        for q in quads:
            for v in range(p.size):
                total += 1
                lhs, rhs = _nr2_sides(pres, v, *q)
                if pres.psi_vector(lhs) != pres.psi_vector(rhs):
                    bad.append(f"quadruple={[pres.label(x) for x in q]} v={pres.label(v)}")
        return count_check(f"{pre}.psi-route", total, bad)

    return _collect([(f"{pre}.quadruples", hypotheses), (f"{pre}.membership", membership),
                     (f"{pre}.psi-route", psi_route)])


# -- Lemma psiinjective ------------------------------------------------------------------------

def verify_psiinjective(ws: Workspace) -> list[Check]:
    p = ws.params
    N, g, L = p.size, p.g, p.L
    pre = "lemma.psiinjective"
    if g < 2:
        return [_vacuous(f"{pre}.quotient-dim", p)]
    V = ["V1", "V2", "V3"]

    def quotient():
        q, s = ws.quotient_dim(V)
        return make_check(f"{pre}.quotient-dim", N - 1, q, **ws.meta(s))

    def rank_v():
        return make_check(f"{pre}.rank-psi-v", N - 1, ws.b_rank(ws.psi_columns(V)))

    def with_rho0():
        return make_check(f"{pre}.direct-sum-rho0", N, ws.b_rank(ws.psi_columns(V) + [{0: 1}]))

    def final():
        return make_check(f"{pre}.final-count", g * (L * L - 1), len(ws.catalog.subspaces["B1"]) - 1)

    return _collect([(f"{pre}.quotient-dim", quotient), (f"{pre}.rank-psi-v", rank_v),
                     (f"{pre}.direct-sum-rho0", with_rho0), (f"{pre}.final-count", final)])


# -- Claims 1-7 ------------------------------------------------------------------------------

def y_column(pres: Presentation, v: int, s: int) -> int:
    """The fixed lift X(v, s, s + s'') of Y(v, s)."""
    return pres.column(v, s, pres.add(s, y_partner(pres, s)))


def z_terms(pres: Presentation, v: int, s: int) -> dict[int, int]:
    """Z(v, s) = sum_{k=1}^{L} k * Y(v + (k-1) s, s) on the fixed lifts."""
    out: dict[int, int] = {}
    for k in range(1, pres.params.L + 1):
        c = y_column(pres, pres.lincomb((1, v), (k - 1, s)), s)
        out[c] = out.get(c, 0) + k
    return {c: x for c, x in out.items() if x}


def _combine(*parts: tuple[int, dict]) -> dict:
    out: dict[int, int] = {}
    for coef, vec in parts:
        for k, x in vec.items():
            out[k] = out.get(k, 0) + coef * x
    return {k: x for k, x in out.items() if x}


def verify_claims(ws: Workspace) -> list[Check]:
    pres, p = ws.pres, ws.params
    g, L, N = p.g, p.L, p.size
    pre = "claim"
    if g < 2:
        return [_vacuous(f"{pre}.1", p)]
    B = [pres.basis(j) for j in range(p.rank)]
    es = sorted({1, L - 1})
    f = pres.pair_form
    lin = pres.lincomb
    Y = lambda v, s: {y_column(pres, v, s): 1}

    def plane(i):
        return [lin((c, pres.a(i)), (d, pres.b(i))) for c in range(L) for d in range(L)]

    def membership(name, instances):
        def run():
            span = ws.span("V1")
            bad, total = [], 0
            for label, vec in instances():
                total += 1
                if not span.contains(vec):
                    bad.append(label)
            return count_check(name, total, bad, certificates=span.certificates, **ws.meta(span))
        return run

    def claim1():
        for s in B:
            for s1 in B:
                for s2 in B:
                    if s in (s1, s2) or f(s, s1) or f(s, s2):
                        continue
                    for e1 in es:
                        for e2 in es:
                            for v in range(N):
                                vec = _lin(pres, [(1, v, s, lin((1, s), (e1, s1))), (-1, v, s, lin((1, s), (e2, s2)))])
                                yield f"v={pres.label(v)} s={pres.label(s)} {e1}{pres.label(s1)} {e2}{pres.label(s2)}", vec

    def proj(v, i):
        c = pres.coords[v]
        return lin((c[2 * i - 2], pres.a(i)), (c[2 * i - 1], pres.b(i)))

    def claim2():
        for i in range(1, g + 1):
            for s in (pres.a(i), pres.b(i)):
                for v in range(N):
                    yield f"v={pres.label(v)} s={pres.label(s)}", _combine((1, Y(v, s)), (-1, Y(proj(v, i), s)))

    def claim3():
        for i in range(1, g + 1):
            ai, bi = pres.a(i), pres.b(i)
            for v in plane(i):
                vec = _combine((1, Y(v, ai)), (-2, Y(lin((1, v), (1, bi)), ai)), (1, Y(lin((1, v), (2, bi)), ai)),
                               (-1, Y(v, bi)), (2, Y(lin((1, v), (1, ai)), bi)), (-1, Y(lin((1, v), (2, ai)), bi)))
                yield f"i={i} v={pres.label(v)}", vec

    def claim5():
        for i in range(1, g + 1):
            ai, bi = pres.a(i), pres.b(i)
            for v in plane(i):
                vec = _combine((1, z_terms(pres, v, ai)), (-2, z_terms(pres, lin((1, v), (1, bi)), ai)),
                               (1, z_terms(pres, lin((1, v), (2, bi)), ai)),
                               (-L, Y(lin((1, v), (1, ai)), bi)), (L, Y(v, bi)))
                yield f"i={i} v={pres.label(v)}", vec

    def image_check(name, target):
        """psi(lift) - target(v, s) lies in psi(span V1), exactly in B_g."""
        def run():
            span, store = _b_span(ws, ws.psi_columns(["V1"]))
            bad, total = [], 0
            for i in range(1, g + 1):
                for s in (pres.a(i), pres.b(i)):
                    for v in plane(i):
                        total += 1
                        lift, formula = target(v, s)
                        if not _b_member(span, store, _sub(pres.psi_vector(lift), formula)):
                            bad.append(f"v={pres.label(v)} s={pres.label(s)}")
            return count_check(name, total, bad, certificates=total - len(bad))
        return run

    def claim4_target(v, s):
        rho: dict[int, int] = {}
        for k, c in ((v, 1), (lin((1, v), (1, s)), -2), (lin((1, v), (2, s)), 1)):
            rho[k] = rho.get(k, 0) + c
        return Y(v, s), {k: c for k, c in rho.items() if c}

    def z_target(v, s):
        rho: dict[int, int] = {}
        for k, c in ((lin((1, v), (1, s)), L), (v, -L)):
            rho[k] = rho.get(k, 0) + c
        return z_terms(pres, v, s), {k: c for k, c in rho.items() if c}

    def claim6():
        gens = []
        for i in range(1, g + 1):
            ai, bi = pres.a(i), pres.b(i)
            gens += [y_column(pres, lin((c, ai), (d, bi)), ai) for c in range(L - 1) for d in range(L)]
            gens += [y_column(pres, lin((d, bi),), bi) for d in range(L - 1)]
        if not ws.exact:
            raise NotTranslationClosed("the pruned Y generating set is not translation-closed")
        span = ws.span("V1")
        q_list = span.add_columns(gens)
        q_v2, s = ws.quotient_dim(["V2"], modulo=["V1"])
        return make_check(f"{pre}.6", {"generators": g * (L * L - 1), "quotient_dim": q_v2},
                          {"generators": len(gens), "quotient_dim": q_list}, **ws.meta(s))

    def claim7():
        r = ws.b_rank(ws.psi_columns(["V2"]) + ws.psi_columns(["V1"]) + [{0: 1}])
        return make_check(f"{pre}.7", N, r)

    return _collect([
        (f"{pre}.1", membership(f"{pre}.1", claim1)),
        (f"{pre}.2", membership(f"{pre}.2", claim2)),
        (f"{pre}.3", membership(f"{pre}.3", claim3)),
        (f"{pre}.4", image_check(f"{pre}.4", claim4_target)),
        (f"{pre}.z-formula", image_check(f"{pre}.z-formula", z_target)),
        (f"{pre}.5", membership(f"{pre}.5", claim5)),
        (f"{pre}.6", claim6),
        (f"{pre}.7", claim7),
    ])


def verify_all(ws: Workspace, sample: int | None = None) -> list[Check]:
    out = verify_presentation(ws)
    out += verify_v1injective(ws)
    out += verify_newrelation1(ws, sample)
    out += verify_eliminatev3(ws)
    out += verify_newrelation2(ws)
    out += verify_psiinjective(ws)
    out += verify_claims(ws)
    return out


__all__ = [
    "EXACT_COL_CAP", "PASS", "Workspace", "counting_identities", "dim_b1", "dim_b2", "dim_b3",
    "newrelation1_triples", "newrelation2_quadruples", "verify_all", "verify_claims", "verify_eliminatev3",
    "verify_newrelation1", "verify_newrelation2", "verify_presentation", "verify_psiinjective",
    "verify_v1injective", "y_column", "z_terms",
]
