import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from homlab.errors import BudgetExceeded, InputError, ParameterError
from homlab.lattice import (LatticeParams, TransvectionGenerator, ZlVector, content, enumerate_iso_uni_pairs,
                            enumerate_vectors, is_isotropic, is_unimodular, pairing, sp_orbit_count_bfs, sp_orbits,
                            tau, transvections)

SMALL = [(1, 2), (1, 3), (1, 4), (1, 6), (2, 2), (2, 3)]


def vec(p, *coords):
    return ZlVector(p, coords)


@st.composite
def params_and_vectors(draw, k=1):
    g, L = draw(st.sampled_from(SMALL))
    p = LatticeParams(g, L)
    vs = [ZlVector.from_index(p, draw(st.integers(0, p.size - 1))) for _ in range(k)]
    return p, vs


def has_left_inverse(vs):
    """Brute-force splitting oracle: some M over Z/L with V M = I."""
    p = vs[0].params
    k, n, L = len(vs), p.rank, p.L
    for entries in itertools.product(range(L), repeat=n * k):
        M = [entries[i * k:(i + 1) * k] for i in range(n)]
        if all(sum(v.coords[i] * M[i][c] for i in range(n)) % L == (r == c)
               for r, v in enumerate(vs) for c in range(k)):
            return True
    return False


class TestParams:
    def test_rejects_small_level(self):
        with pytest.raises(ParameterError):
            LatticeParams(1, 1)

    def test_rejects_zero_genus(self):
        with pytest.raises(ParameterError):
            LatticeParams(0, 2)

    def test_index_overflow_fails_loudly(self):
        with pytest.raises(ParameterError):
            LatticeParams(40, 7)

    def test_coordinates_reduced(self):
        p = LatticeParams(1, 3)
        assert vec(p, 4, -1).coords == (1, 2)

    def test_mismatched_params(self):
        with pytest.raises(ParameterError):
            pairing(ZlVector.a(LatticeParams(1, 2), 1), ZlVector.a(LatticeParams(1, 3), 1))


class TestPairing:
    def test_normalization(self):
        p = LatticeParams(1, 5)
        assert pairing(ZlVector.a(p, 1), ZlVector.b(p, 1)) == 1
        assert pairing(ZlVector.b(p, 1), ZlVector.a(p, 1)) == 4

    def test_cross_terms_cancel(self):
        p = LatticeParams(2, 3)
        x = ZlVector.a(p, 1) + ZlVector.b(p, 2)
        y = ZlVector.b(p, 1) + ZlVector.a(p, 2)
        assert pairing(x, y) == 0

    @given(params_and_vectors(k=3))
    def test_bilinear_antisymmetric(self, pv):
        p, (x, y, z) = pv
        assert (pairing(x, y) + pairing(y, x)) % p.L == 0
        assert pairing(x + y, z) == (pairing(x, z) + pairing(y, z)) % p.L
        assert pairing(x, x) == 0

    @given(params_and_vectors(k=2))
    def test_group_structure(self, pv):
        _, (x, y) = pv
        assert (x + y) - y == x


class TestPredicates:
    def test_isotropic_examples(self):
        p = LatticeParams(2, 2)
        assert is_isotropic([ZlVector.a(p, 1), ZlVector.a(p, 2)])
        assert not is_isotropic([ZlVector.a(p, 1), ZlVector.b(p, 1)])
        assert is_isotropic([ZlVector.a(p, 1)])
        assert is_isotropic([])

    def test_unimodular_examples(self):
        p = LatticeParams(1, 4)
        assert is_unimodular([ZlVector.a(p, 1)])
        assert not is_unimodular([2 * ZlVector.a(p, 1)])
        q = LatticeParams(2, 2)
        assert is_unimodular([ZlVector.a(q, 1) + ZlVector.b(q, 1), ZlVector.a(q, 2)])

    def test_unimodular_repeated_vector(self):
        p = LatticeParams(1, 3)
        with pytest.raises(InputError):
            is_unimodular([ZlVector.a(p, 1), ZlVector.a(p, 1)])

    def test_too_many_vectors(self):
        p = LatticeParams(1, 2)
        vs = enumerate_vectors(p)[1:]
        assert not is_unimodular(vs)

    @pytest.mark.parametrize("g,L", [(1, 2), (1, 3), (1, 4), (1, 6)])
    def test_singletons_against_splitting_oracle(self, g, L):
        p = LatticeParams(g, L)
        for v in enumerate_vectors(p):
            assert is_unimodular([v]) == has_left_inverse([v]), v

    @pytest.mark.parametrize("g,L", [(1, 2), (1, 3), (1, 4)])
    def test_pairs_against_splitting_oracle(self, g, L):
        p = LatticeParams(g, L)
        vs = enumerate_vectors(p)
        for x, y in itertools.combinations(vs, 2):
            assert is_unimodular([x, y]) == has_left_inverse([x, y]), (x, y)

    def test_pairs_against_splitting_oracle_genus_two(self):
        p = LatticeParams(2, 2)
        vs = enumerate_vectors(p)
        for x, y in itertools.combinations(vs[1:], 2):
            assert is_unimodular([x, y]) == has_left_inverse([x, y])


class TestContent:
    def test_examples(self):
        p = LatticeParams(1, 6)
        assert content(ZlVector.zero(p)) == 6
        assert content(vec(p, 2, 4)) == 2
        assert content(ZlVector.a(p, 1)) == 1

    @given(params_and_vectors())
    def test_primitive_iff_unimodular(self, pv):
        _, (v,) = pv
        if not v.is_zero():
            assert (content(v) == 1) == is_unimodular([v])

    @given(params_and_vectors())
    def test_content_divides_and_factors(self, pv):
        p, (v,) = pv
        c = content(v)
        assert p.L % c == 0
        # some primitive w has c * w = v
        assert any(c * w == v for w in enumerate_vectors(p) if math.gcd(p.L, *w.coords) == 1)


class TestEnumeration:
    def test_counts_and_radix(self):
        p = LatticeParams(1, 2)
        vs = enumerate_vectors(p)
        assert len(vs) == 4
        assert (ZlVector.a(p, 1) + ZlVector.b(p, 1)).index == 3
        assert len(enumerate_vectors(LatticeParams(2, 2))) == 16
        assert len(enumerate_vectors(LatticeParams(2, 3))) == 81

    def test_index_bijection(self):
        p = LatticeParams(2, 3)
        assert [v.index for v in enumerate_vectors(p)] == list(range(81))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_vectors(LatticeParams(2, 3), budget=80)

    @pytest.mark.parametrize("L", [2, 3, 4, 5])
    def test_no_pairs_in_genus_one(self, L):
        assert enumerate_iso_uni_pairs(LatticeParams(1, L)) == []

    def test_pair_count_genus_two(self):
        # brute force over all ordered pairs with the splitting oracle
        p = LatticeParams(2, 2)
        vs = enumerate_vectors(p)
        oracle = [(x, y) for x in vs for y in vs
                  if x != y and pairing(x, y) == 0 and has_left_inverse([x, y])]
        pairs = enumerate_iso_uni_pairs(p)
        assert len(pairs) == len(oracle) == 90
        assert set(pairs) == set(oracle)


class TestOrbits:
    def test_tau(self):
        assert [tau(2), tau(12), tau(7)] == [2, 6, 2]

    @pytest.mark.parametrize("L,expected", [(2, 2), (3, 2), (4, 3), (5, 2), (6, 4)])
    def test_genus_one(self, L, expected):
        assert sp_orbit_count_bfs(LatticeParams(1, L)) == expected == tau(L)

    def test_genus_two(self):
        assert sp_orbit_count_bfs(LatticeParams(2, 2)) == 2

    @pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
    def test_orbit_iff_content(self, L):
        p = LatticeParams(1, L)
        orbs = sp_orbits(p)
        where = {i: k for k, o in enumerate(orbs) for i in o}
        vs = enumerate_vectors(p)
        for x in vs:
            for y in vs:
                assert (where[x.index] == where[y.index]) == (content(x) == content(y))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            sp_orbit_count_bfs(LatticeParams(2, 3), budget=10)

    @settings(max_examples=50)
    @given(params_and_vectors(k=2), st.data())
    def test_transvections_preserve_pairing(self, pv, data):
        p, (x, y) = pv
        t = data.draw(st.sampled_from(transvections(p)))
        assert pairing(t(x), t(y)) == pairing(x, y)

    def test_transvection_needs_primitive_direction(self):
        p = LatticeParams(1, 4)
        with pytest.raises(InputError):
            TransvectionGenerator(2 * ZlVector.a(p, 1))
