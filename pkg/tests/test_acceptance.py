"""Acceptance criteria 1 to 10, all at zero tolerance.

Each test carries a ``criterion`` marker; conftest prints one pass/fail
line per criterion at the end of the run.  Runtime bounds are asserted
alongside the values.
"""
import functools
import itertools
import json
import random
import time

import pytest

from homlab.errors import InconsistencyError
from homlab.fox.cover import build_cover_complex, h1_dims
from homlab.fox.identities import verify_commutator_identities, verify_cover_dims, verify_I_structure
from homlab.groupring import verify_case3_cancellation, verify_case4_telescoping
from homlab.lattice import LatticeParams, ZlVector, enumerate_vectors, sp_orbit_count_bfs, tau
from homlab.presentation import Workspace, counting_identities, verify_v1injective
from homlab.presentation.lemmas import dim_b1
from homlab.presentation.spans import ExactFreeSpan
from homlab.report import strip_timing
from homlab.suites import SuiteConfig, run_suite

criterion = pytest.mark.criterion

MEMBERSHIP_CHECKS = ("lemma.newrelation1.exhaustive", "lemma.eliminatev3.members", "lemma.newrelation2.membership",
                     "claim.1", "claim.2", "claim.3", "claim.4", "claim.z-formula", "claim.5")
LEMMA_PREFIXES = ("lemma.psiinjective.", "lemma.newrelation1.", "lemma.eliminatev3.", "lemma.newrelation2.")


@functools.cache
def presentation_report(g, L, mode, seed=0):
    t = time.perf_counter()
    rep = run_suite(SuiteConfig(g, L, suites=("presentation",), mode=mode, seed=seed))
    return rep, time.perf_counter() - t


def by_name(rep, g, L):
    prefix = f"g{g}_L{L}/"
    return {c.name[len(prefix):]: c for c in rep.checks}


def assert_all_pass(checks):
    bad = [(c.name, c.status, c.expected, c.actual) for c in checks if c.status != "pass"]
    assert not bad


@criterion(1, "orbit counts equal tau(L)")
def test_criterion_1_orbits():
    t = time.perf_counter()
    got = [sp_orbit_count_bfs(LatticeParams(1, L)) for L in (2, 3, 4, 5, 6)]
    assert got == [tau(L) for L in (2, 3, 4, 5, 6)] == [2, 2, 3, 2, 4]
    assert sp_orbit_count_bfs(LatticeParams(2, 2)) == 2
    assert time.perf_counter() - t < 10


@criterion(2, "cover homology dimensions")
@pytest.mark.parametrize("g,L,h1c,cc,h1b,i_dim", [
    (1, 2, 2, 0, 5, 3),
    (2, 2, 34, 30, 49, 15),
    (2, 3, 164, None, None, 80),
])
def test_criterion_2_cover_dims(g, L, h1c, cc, h1b, i_dim):
    t = time.perf_counter()
    p = LatticeParams(g, L)
    closed, bounded = h1_dims(build_cover_complex(p, True)), h1_dims(build_cover_complex(p, False))
    assert closed.h1 == h1c == 2 + p.size * (2 * g - 2)
    assert bounded.h1 == 1 + p.size * (2 * g - 1)
    assert bounded.i_dim == i_dim
    if cc is not None:
        assert (closed.c_dim, bounded.h1) == (cc, h1b)
    assert bounded.c_dim - closed.c_dim == bounded.i_dim
    assert_all_pass(verify_cover_dims(p))
    assert time.perf_counter() - t < 60


@criterion(3, "relator translates have a one-dimensional kernel spanned by all-ones")
@pytest.mark.parametrize("g,L", [(1, 2), (1, 3), (2, 2)])
def test_criterion_3_identify_i(g, L):
    t = time.perf_counter()
    assert_all_pass(verify_I_structure(LatticeParams(g, L)))
    assert time.perf_counter() - t < 30


@criterion(4, "commutator calculus identities")
def test_criterion_4_commutator_identities():
    t = time.perf_counter()
    ex = verify_commutator_identities(LatticeParams(1, 2), exhaustive_len=4)
    assert ex
    assert_all_pass(ex)
    for g, L in ((2, 2), (2, 3)):
        checks = verify_commutator_identities(LatticeParams(g, L), 500, seed=0)
        assert checks and all(c.actual["instances"] >= 500 for c in checks)
        assert_all_pass(checks)
    assert time.perf_counter() - t < 120


@criterion(5, "case 3 cancellation and case 4 telescoping")
def test_criterion_5_cancellation():
    t = time.perf_counter()
    p = LatticeParams(1, 2)
    vs = enumerate_vectors(p)
    for f, y, z in itertools.product(vs, repeat=3):
        assert verify_case3_cancellation(p, f, y, z)
    for f, x, y, z in itertools.product(vs, repeat=4):
        assert verify_case4_telescoping(p, f, x, y, z)
    for g, L in ((2, 2), (2, 3)):
        q = LatticeParams(g, L)
        rng = random.Random(1000 * g + L)
        draw = lambda: ZlVector.from_index(q, rng.randrange(q.size))
        for _ in range(1000):
            f, x, y, z = draw(), draw(), draw(), draw()
            assert verify_case3_cancellation(q, f, y, z)
            assert verify_case4_telescoping(q, f, x, y, z)
    assert time.perf_counter() - t < 30


@criterion(6, "psi is injective on span V1 and psi(V1) + B1 = B_g")
@pytest.mark.parametrize("g,L,r,b1", [(2, 2, 9, 7), (3, 2, 54, 10), (2, 3, 64, 17)])
def test_criterion_6_v1injective(g, L, r, b1):
    t = time.perf_counter()
    p = LatticeParams(g, L)
    checks = {c.name: c for c in verify_v1injective(Workspace(p, "hybrid"))}
    assert r == L ** (2 * g) - g * (L * L - 1) - 1 and b1 == dim_b1(g, L)
    rk = checks["lemma.v1injective.rank-psi-v1"]
    ds = checks["lemma.v1injective.direct-sum"]
    assert rk.passed and rk.actual == r
    assert ds.passed and ds.actual == {"rank": p.size, "sum": r + b1}
    assert time.perf_counter() - t < 120


@criterion(7, "psi injective on span V, with the new relations")
@pytest.mark.parametrize("g,L,mode,values,limit", [
    (2, 2, "exact", (15, 15, 16), 600),
    (2, 3, "modular", (80, 80, 81), 1800),
])
def test_criterion_7_psiinjective(g, L, mode, values, limit):
    rep, secs = presentation_report(g, L, mode)
    checks = by_name(rep, g, L)
    q, r, r0 = (checks[f"lemma.psiinjective.{k}"] for k in ("quotient-dim", "rank-psi-v", "direct-sum-rho0"))
    assert (q.actual, r.actual, r0.actual) == values
    assert q.certification == mode
    selected = [c for n, c in checks.items() if n.startswith(LEMMA_PREFIXES)]
    assert {n.split(".")[1] for n, c in checks.items() if n.startswith(LEMMA_PREFIXES)} == {
        "psiinjective", "newrelation1", "eliminatev3", "newrelation2"}
    assert_all_pass(selected)
    if mode == "exact":
        assert checks["lemma.newrelation1.exhaustive"].actual["instances"] > 0
        assert checks["lemma.eliminatev3.members"].actual["instances"] == 64
        assert checks["lemma.newrelation2.membership"].actual["instances"] >= 16
    assert secs < limit


@criterion(8, "claims 1 to 7 at (2,2), exact")
def test_criterion_8_claims():
    rep, secs = presentation_report(2, 2, "exact")
    checks = by_name(rep, 2, 2)
    claims = [c for n, c in checks.items() if n.startswith("claim.")]
    assert {f"claim.{k}" for k in range(1, 8)} <= {n for n in checks if n.startswith("claim.")}
    assert_all_pass(claims)
    assert all(c.certification == "exact" for c in claims)
    assert checks["claim.6"].actual == {"generators": 6, "quotient_dim": 6} and 2 * (2 * 2 - 1) == 6
    assert checks["claim.7"].actual == 16
    assert secs < 600


@criterion(9, "counting identities for g <= 6, L <= 12")
def test_criterion_9_counting():
    t = time.perf_counter()
    checks = counting_identities(6, 12)
    assert len(checks) == 3 and all(c.actual == {"instances": 66, "failures": 0} for c in checks)
    assert_all_pass(checks)
    assert time.perf_counter() - t < 1


@criterion(10, "determinism and certification metadata")
@pytest.mark.parametrize("g,L,mode", [(2, 2, "exact"), (2, 3, "modular")])
def test_criterion_10_determinism(g, L, mode):
    first, _ = presentation_report(g, L, mode)
    again = run_suite(SuiteConfig(g, L, suites=("presentation",), mode=mode, seed=0))
    a = json.dumps(strip_timing(first.to_json()), sort_keys=True)
    b = json.dumps(strip_timing(again.to_json()), sort_keys=True)
    assert a == b
    for c in first.checks:
        if c.status == "pass" and c.certification == "modular":
            assert len(c.primes) == 2 and len(set(c.primes)) == 2, c.name
            assert all(p > 2 ** 30 and p % L == 1 for p in c.primes), c.name
    if mode == "modular":
        assert any(c.certification == "modular" and c.status == "pass" for c in first.checks)
    else:
        checks = by_name(first, g, L)
        for name in MEMBERSHIP_CHECKS:
            c = checks[name]
            assert c.passed and c.certification == "exact"
            assert c.certificates == c.actual["instances"] > 0, name


@criterion(10, "determinism and certification metadata")
def test_criterion_10_tampered_certificate_is_caught():
    ws = Workspace(LatticeParams(2, 2), "exact")
    span = ws.span()
    assert isinstance(span, ExactFreeSpan)
    row = ws.pres.instantiate(ws.pres.templates["R1"][0], 0)
    assert span.contains(row) and span.certificates == 1
    lab = next(iter(span._store))
    span._store[lab] = {k: 2 * c for k, c in span._store[lab].items()}
    # re-multiplication against the stored rows must now disagree for some relation
    with pytest.raises(InconsistencyError):
        for lab2, r in list(span._store.items()):
            span.contains(r)
