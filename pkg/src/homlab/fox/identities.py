"""Machine checks for the commutator calculus and the boundary-class structure
of the abelian covers.

Chains are evaluated with the batch Fox kernel on concatenated letter
arrays; zero padding inside a concatenation is a no-op, so no free
reduction is needed.  Every identity is checked both in the bounded cover
(equality of 1-chains) and in the closed cover (equality modulo the image
of d2).
"""
from __future__ import annotations

import random

import numpy as np

from ..groupring import rho
from ..lattice import LatticeParams, ZlVector
from ..linalg import kernel_basis, rank
from ..report import Check, count_check, make_check
from .chains import fox_chains
from .cover import CoverComplex, build_cover_complex, h1_dims, translate_chain
from .words import FreeWord, commutator, conjugate, enumerate_reduced_words, letters_array, random_word

RANDOM_WORD_LEN = 6


def kernel_word(params: LatticeParams, rng: random.Random, max_len: int = RANDOM_WORD_LEN) -> FreeWord:
    """A random word with trivial mod-L abelianization, not necessarily in [G, G]."""
    w = random_word(params, rng, max_len)
    sums = w.exponent_sums()
    L = params.L
    for j, s in enumerate(sums):
        k = (-s) % L + L * rng.randint(-1, 1)
        w = w * FreeWord.generator(params, j) ** k
    return w


def _inv_array(arr: np.ndarray) -> np.ndarray:
    return -arr[:, ::-1]


class _Pool:
    """Padded letter arrays of a word list and of the inverse words."""

    def __init__(self, words: list[FreeWord]):
        self.words = words
        self.fwd = letters_array(words)
        self.inv = _inv_array(self.fwd)

    def __len__(self):
        return len(self.words)


def _diff_failures(complexes: list[CoverComplex], terms, labels) -> dict[bool, list[str]]:
    """terms: list of (sign, letters array) with a common row count."""
    g, L = complexes[0].params.g, complexes[0].params.L
    diff = None
    for sign, arr in terms:
        ch = fox_chains(arr, g, L)[0] * sign
        diff = ch if diff is None else diff + ch
    out = {}
    for c in complexes:
        ok = c.homologous_batch(diff)
        out[c.closed] = [labels(i) for i in np.flatnonzero(~ok)[:10]] if not ok.all() else []
        out[(c.closed, "n")] = int((~ok).sum())
    return out


def _cat(*parts) -> np.ndarray:
    return np.concatenate(parts, axis=1)


class _Tally:
    def __init__(self):
        self.total = {}
        self.failures = {}

    def add(self, name: str, n: int, result: dict):
        for closed in (False, True):
            key = (name, closed)
            self.total[key] = self.total.get(key, 0) + n
            fl = self.failures.setdefault(key, [])
            fl.extend(result[closed])
            fl.extend([None] * (result[(closed, "n")] - len(result[closed])))

    def checks(self, prefix: str) -> list[Check]:
        out = []
        for (name, closed), total in self.total.items():
            fails = self.failures[(name, closed)]
            shown = [f for f in fails if f is not None]
            c = count_check(f"{prefix}.{name}.{'closed' if closed else 'bounded'}", total, fails)
            c.witnesses = shown[:10]
            out.append(c)
        return out


def verify_commutator_identities(params: LatticeParams, sample_count: int = 500, seed: int = 0,
                                 exhaustive_len: int | None = None) -> list[Check]:
    """Commutator identities and the conjugation invariance of bracket classes.

    With ``exhaustive_len`` every identity is checked over all reduced
    words up to that length (subscript f = identity); otherwise over
    ``sample_count`` seeded random instances with a random subscript f.
    """
    complexes = [build_cover_complex(params, False), build_cover_complex(params, True)]
    tally = _Tally()
    if exhaustive_len is not None:
        _exhaustive(params, exhaustive_len, complexes, tally)
    else:
        _sampled(params, sample_count, seed, complexes, tally)
    return tally.checks("fox.commutator")


def _exhaustive(params, max_len, complexes, tally):
    W = _Pool(enumerate_reduced_words(params, max_len))
    K = _Pool([w for w in W.words if w.in_kernel()])
    Kc = _Pool(K.words + [FreeWord.relator(params)])
    n = len(W)

    def lab(*pools):
        def f(i):
            idx = np.unravel_index(i, [len(p) for p in pools])
            return " | ".join(str(p.words[j]) or "1" for p, j in zip(pools, idx))
        return f

    # item 1: <a, x> = <a>_x - <a>, a in the kernel subgroup
    ai, xi = (m.ravel() for m in np.meshgrid(np.arange(len(K)), np.arange(n), indexing="ij"))
    A, Ai, X, Xi = K.fwd[ai], K.inv[ai], W.fwd[xi], W.inv[xi]
    res = _diff_failures(complexes, [(1, _cat(Ai, Xi, A, X)), (-1, _cat(Xi, A, X)), (1, A)], lab(K, W))
    tally.add("item1", len(ai), res)
    # item 2: <x, y> = -<y, x>
    xi, yi = (m.ravel() for m in np.meshgrid(np.arange(n), np.arange(n), indexing="ij"))
    X, Xi, Y, Yi = W.fwd[xi], W.inv[xi], W.fwd[yi], W.inv[yi]
    res = _diff_failures(complexes, [(1, _cat(Xi, Yi, X, Y)), (1, _cat(Yi, Xi, Y, X))], lab(W, W))
    tally.add("item2", len(xi), res)
    # item 3 consequence: <y^-1, z> = -<y, z>_{-y}
    res = _diff_failures(complexes, [(1, _cat(X, Yi, Xi, Y)), (1, _cat(Yi, X, Y, Xi))], lab(W, W))
    tally.add("item3.inverse", len(xi), res)
    # item 3: <xy, z> = <x, z>_y + <y, z>, one x at a time
    for x in range(n):
        X = np.broadcast_to(W.fwd[x], (len(yi), W.fwd.shape[1]))
        Xi = np.broadcast_to(W.inv[x], X.shape)
        Y, Yi, Z, Zi = W.fwd[xi], W.inv[xi], W.fwd[yi], W.inv[yi]
        terms = [(1, _cat(Yi, Xi, Zi, X, Y, Z)), (-1, _cat(Yi, Xi, Zi, X, Z, Y)), (-1, _cat(Yi, Zi, Y, Z))]

        def lab3(i, x=x):
            y, z = divmod(int(i), n)
            return f"{W.words[x] or '1'} | {W.words[y] or '1'} | {W.words[z] or '1'}"
        tally.add("item3", len(xi), _diff_failures(complexes, terms, lab3))
    # chdesc 2: <a>_{cf} = <a>_f = <a>_{fc} for kernel words a, c
    for a in range(len(K)):
        ci, fi = (m.ravel() for m in np.meshgrid(np.arange(len(Kc)), np.arange(n), indexing="ij"))
        A = np.broadcast_to(K.fwd[a], (len(ci), K.fwd.shape[1]))
        C, Ci, F, Fi = Kc.fwd[ci], Kc.inv[ci], W.fwd[fi], W.inv[fi]

        def labc(i, a=a):
            c, f = divmod(int(i), n)
            return f"{K.words[a] or '1'} | {Kc.words[c] or '1'} | {W.words[f] or '1'}"
        base = (-1, _cat(Fi, A, F))
        tally.add("chdesc2.left", len(ci), _diff_failures(complexes, [(1, _cat(Fi, Ci, A, C, F)), base], labc))
        tally.add("chdesc2.right", len(ci), _diff_failures(complexes, [(1, _cat(Ci, Fi, A, F, C)), base], labc))
    # chdesc 3: <x, y> = 0 for kernel words
    xi2, yi2 = (m.ravel() for m in np.meshgrid(np.arange(len(K)), np.arange(len(K)), indexing="ij"))
    res = _diff_failures(complexes, [(1, _cat(K.inv[xi2], K.inv[yi2], K.fwd[xi2], K.fwd[yi2]))], lab(K, K))
    tally.add("chdesc3", len(xi2), res)


def _sampled(params, count, seed, complexes, tally):
    rng = random.Random(f"commutator:{seed}:{params.g}:{params.L}")
    rw = lambda: random_word(params, rng, RANDOM_WORD_LEN)  # noqa: E731
    kw = lambda: kernel_word(params, rng)  # noqa: E731
    r = FreeWord.relator(params)
    cases: dict[str, list[tuple[list[tuple[int, FreeWord]], str]]] = {}

    def add(name, terms, *words):
        cases.setdefault(name, []).append((terms, " | ".join(str(w) or "1" for w in words)))

    for _ in range(count):
        x, y, z, f = rw(), rw(), rw(), rw()
        a, c, k = kw(), kw(), kw()
        cj = lambda w: conjugate(w, f)  # noqa: E731
        add("item1", [(1, cj(commutator(a, x))), (-1, cj(conjugate(a, x))), (1, cj(a))], a, x, f)
        add("item2", [(1, cj(commutator(x, y))), (1, cj(commutator(y, x)))], x, y, f)
        add("item3", [(1, cj(commutator(x * y, z))), (-1, cj(conjugate(commutator(x, z), y))),
                      (-1, cj(commutator(y, z)))], x, y, z, f)
        add("item3.inverse", [(1, cj(commutator(y.inverse(), z))),
                              (1, cj(conjugate(commutator(y, z), y.inverse())))], y, z, f)
        br = commutator(x, y)
        add("chdesc2.left", [(1, conjugate(br, c * f)), (-1, conjugate(br, f))], x, y, c, f)
        add("chdesc2.right", [(1, conjugate(br, f * k)), (-1, conjugate(br, f))], x, y, f, k)
        add("chdesc2.relator", [(1, conjugate(a, f * r)), (-1, conjugate(a, f))], a, f)
        add("chdesc3", [(1, cj(commutator(a, c)))], a, c, f)
    for name, items in cases.items():
        nterms = len(items[0][0])
        terms = []
        for t in range(nterms):
            sign = items[0][0][t][0]
            terms.append((sign, letters_array([it[0][t][1] for it in items])))
        res = _diff_failures(complexes, terms, lambda i, items=items: items[int(i)][1])
        tally.add(name, len(items), res)


def verify_fox_fundamental(params: LatticeParams, sample_count: int = 500, seed: int = 0) -> Check:
    """d1(chain(w)) = rho[w] - rho[0] on seeded random words."""
    rng = random.Random(f"fundamental:{seed}:{params.g}:{params.L}")
    c = build_cover_complex(params, False)
    words = [random_word(params, rng, 12) for _ in range(sample_count)]
    chains, ends = fox_chains(letters_array(words), params.g, params.L)
    failures = []
    d1 = c.d1
    for w, ch, e in zip(words, chains, ends):
        vec = {int(k): int(ch[k]) for k in np.flatnonzero(ch)}
        boundary = d1.matvec(vec)
        expected = (rho(w.image()) - rho(ZlVector.zero(params))).coeffs
        if boundary != expected or int(e) != w.image().index:
            failures.append(str(w))
    return count_check("fox.fundamental-identity", len(words), failures)


def verify_cover_dims(params: LatticeParams) -> list[Check]:
    """Chain-complex condition, ranks, Euler characteristic and the C/I dimension count."""
    N, g = params.size, params.g
    closed = build_cover_complex(params, True)
    bounded = build_cover_complex(params, False)
    dc, db = h1_dims(closed), h1_dims(bounded)
    ker = kernel_basis(closed.d2)
    ones = ker[0] if len(ker) == 1 else {}
    first = next(iter(ones.values()), None)
    is_theta = len(ker) == 1 and len(ones) == N and all(v == first for v in ones.values())
    p = "fox.cover"
    return [
        make_check(f"{p}.d1d2-zero", True, closed.d1.matmul(closed.d2).is_zero()),
        make_check(f"{p}.rank-d1", N - 1, closed.rank_d1),
        make_check(f"{p}.kernel-d2-theta", True, is_theta),
        make_check(f"{p}.h1-closed", 2 + N * (2 * g - 2), dc.h1),
        make_check(f"{p}.c-closed", 2 + N * (2 * g - 2) - 2 * g, dc.c_dim),
        make_check(f"{p}.h1-bounded", 1 + N * (2 * g - 1), db.h1),
        make_check(f"{p}.c-bounded", 1 + N * (2 * g - 1) - 2 * g, db.c_dim),
        make_check(f"{p}.i-dim", N - 1, db.i_dim),
        make_check(f"{p}.c-difference-equals-i", db.i_dim, db.c_dim - dc.c_dim),
    ]


def verify_I_structure(params: LatticeParams) -> list[Check]:
    """dim I = L^{2g} - 1; the only relation among boundary classes is their sum;
    translations permute the boundary classes freely."""
    N = params.size
    c = build_cover_complex(params, False)
    M = c.relator_translates
    ker = kernel_basis(M)
    ones_ok = len(ker) == 1 and set(ker[0]) == set(range(N)) and len(set(ker[0].values())) == 1
    kappas = [c.kappa(ZlVector.from_index(params, w)) for w in range(N)]
    n_distinct = len({frozenset(k.items()) for k in kappas})
    bad = []
    for v in range(N):
        u = ZlVector.from_index(params, v)
        for w in range(N):
            target = c.translations[v][w]
            if translate_chain(params, kappas[w], u) != kappas[target]:
                bad.append(f"v={u.label()} w={ZlVector.from_index(params, w).label()}")
    sum_zero = not M.matvec({h: 1 for h in range(N)})
    p = "fox.identify-i"
    return [
        make_check(f"{p}.dim", N - 1, rank(M).rank),
        make_check(f"{p}.sum-zero", True, sum_zero),
        make_check(f"{p}.kernel-is-ones", {"dim": 1, "all_ones": True},
                   {"dim": len(ker), "all_ones": ones_ok}),
        make_check(f"{p}.free-translation", {"distinct_classes": N, "failures": 0},
                   {"distinct_classes": n_distinct, "failures": len(bad)}, witnesses=bad),
    ]
