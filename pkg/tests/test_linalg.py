from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from homlab.fox.cover import translation_table
from homlab.errors import InconsistencyError, InputError
from homlab.lattice import LatticeParams
from homlab.linalg import (EXACT, MODULAR, ExactEchelon, Span, kernel_basis, membership, quotient_dim, rank)
from homlab.linalg import modular
from homlab.linalg.equivariant import CharacterBlockSpan, TemplateRows
from homlab.linalg.matrix import SparseRationalMatrix, loads_triplets, dumps_triplets, read_triplets, write_triplets

small_entries = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = [[draw(small_entries) if draw(st.booleans()) else Fraction(0) for _ in range(c)] for _ in range(r)]
    return SparseRationalMatrix.from_dense(rows)


def sympy_rank(m: SparseRationalMatrix) -> int:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m.to_dense()]).rank()


class TestMatrix:
    def test_no_stored_zeros(self):
        m = SparseRationalMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
        assert m.nnz == 1

    def test_out_of_range(self):
        with pytest.raises(InputError):
            SparseRationalMatrix(2, 2, {(2, 0): 1})

    @given(matrices())
    def test_triplet_roundtrip(self, m):
        assert loads_triplets(dumps_triplets(m)) == m

    def test_triplet_file_roundtrip(self, tmp_path):
        m = SparseRationalMatrix(3, 2, {(0, 1): Fraction(-7, 3), (2, 0): 5})
        write_triplets(tmp_path / "m.v1.triplets", m)
        assert read_triplets(tmp_path / "m.v1.triplets") == m

    @pytest.mark.parametrize("text", ["", "2 2", "2 2 1\n", "2 2 1\n0 0", "2 2 2\n0 0 1\n0 0 2\n", "1 1 1\n0 0 x\n"])
    def test_triplet_malformed(self, text):
        with pytest.raises((InputError, ValueError)):
            loads_triplets(text)


class TestRank:
    @settings(max_examples=60)
    @given(matrices())
    def test_exact_matches_sympy(self, m):
        assert rank(m).rank == sympy_rank(m)

    @settings(max_examples=60)
    @given(matrices())
    def test_modular_matches_exact(self, m):
        cert = rank(m, MODULAR)
        assert cert.rank == rank(m).rank
        assert len(cert.primes) == 2 and all(2**30 < p < 2**31 for p in cert.primes)

    def test_exact_witness_minor_is_nonsingular(self):
        m = SparseRationalMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        cert = rank(m)
        rows, cols = cert.witness
        minor = sympy.Matrix([[m[r, c] for c in cols] for r in rows])
        assert cert.rank == 2 and minor.det() != 0

    def test_modular_needs_two_primes(self):
        with pytest.raises(InputError):
            rank(SparseRationalMatrix.identity(2), MODULAR, primes=[1073741827])

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            rank(SparseRationalMatrix.identity(2), "float")


class TestMembershipKernelQuotient:
    def test_membership_certificate(self):
        m = SparseRationalMatrix.from_dense([[1, 0], [1, 1], [0, 1]])
        res = membership({0: 2, 1: 5, 2: 3}, m)
        assert res.member and m.matvec(res.coefficients) == {0: 2, 1: 5, 2: 3}
        assert not membership({0: 1}, m)

    def test_membership_modular_metadata(self):
        m = SparseRationalMatrix.from_dense([[1, 0], [1, 1], [0, 1]])
        res = membership({0: 2, 1: 5, 2: 3}, m, MODULAR)
        assert res.member and res.mode == MODULAR and len(res.primes) == 2

    def test_membership_dimension_check(self):
        with pytest.raises(InputError):
            membership({5: 1}, SparseRationalMatrix.identity(2))

    @settings(max_examples=40)
    @given(matrices())
    def test_kernel_dimension(self, m):
        ker = kernel_basis(m)
        assert len(ker) == m.cols - sympy_rank(m)
        assert all(not m.matvec(x) for x in ker)

    def test_quotient_dim(self):
        R = [{0: 1}, {1: 1}]
        V = [{0: 1, 1: 1}, {2: 1}, {2: 2}]
        assert quotient_dim(V, R, n=3) == 1
        assert quotient_dim(V, R, MODULAR, n=3) == 1
        assert quotient_dim([], R, n=3) == 0

    def test_certificate_tamper_detected(self):
        ech = ExactEchelon(2)
        ech.add({0: 1, 1: 1}, "r")
        coef = ech.certificate({0: 3, 1: 3})
        assert coef == {"r": 3}
        assert ech.certificate({0: 1}) is None


class TestSpan:
    def test_copy_is_independent(self):
        s = Span(3)
        s.add({0: 1})
        t = s.copy()
        t.add({1: 1})
        assert (s.rank, t.rank) == (1, 2)

    def test_modular_span_agrees(self):
        for mode in (EXACT, MODULAR):
            s = Span(3, mode)
            assert s.extend([{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}]) == 2
            assert s.contains({0: 3, 1: 6, 2: 1}).member

    def test_prime_disagreement_raises(self):
        # the row vanishes mod the first prime only
        p, q = modular.choose_primes(2)
        s = Span(2, MODULAR, primes=[p, q])
        with pytest.raises(InconsistencyError):
            s.add({0: p})


class TestBackends:
    @settings(max_examples=40)
    @given(matrices(max_dim=8))
    def test_python_and_compiled_agree(self, m):
        p = modular.choose_primes(1)[0]
        out = []
        for cls in {modular.ModpEchelon, modular.PyModpEchelon}:
            e = cls(m.cols, p)
            for row in m.row_vectors():
                cols, vals = modular.vector_residues(row, p)
                if cols:
                    e.add_row(cols, vals)
            out.append(e.rank)
        assert len(set(out)) == 1

    def test_primes_are_deterministic_and_congruent(self):
        a = modular.choose_primes(2, seed=5, modulus=3)
        assert a == modular.choose_primes(2, seed=5, modulus=3)
        assert all(p % 3 == 1 and sympy.isprime(p) for p in a)


class TestCharacterBlocks:
    def test_block_rank_matches_full_modular_rank(self):
        # translation-closed rows over (1, 3), blockwise versus fully expanded
        params = LatticeParams(1, 3)
        N = params.size
        templates = TemplateRows([[(1, 0, 0), (-1, 1, 0)], [(1, 0, 1), (1, 3, 0)]])
        blocks = CharacterBlockSpan(params, 2)
        r_blocks = blocks.extend_templates(templates)
        # expand every translate explicitly
        T = translation_table(params)
        rows = []
        for tpl in [[(1, 0, 0), (-1, 1, 0)], [(1, 0, 1), (1, 3, 0)]]:
            for v in range(N):
                row = {}
                for c, off, lab in tpl:
                    col = int(T[v][off]) * 2 + lab
                    row[col] = row.get(col, 0) + c
                rows.append(row)
        m = SparseRationalMatrix.from_rows(2 * N, rows)
        assert r_blocks == rank(m).rank
