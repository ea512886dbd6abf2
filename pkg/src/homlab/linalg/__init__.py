"""Exact and modular rank, span membership, kernels and quotient dimensions.

Vectors are sparse mappings ``{index: value}``.  Matrices are
``SparseRationalMatrix``; spans are taken over columns unless a function
says otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from ..errors import InconsistencyError, InputError
from .exact import ExactEchelon
from .matrix import SparseRationalMatrix, clean_vector, read_triplets, write_triplets
from .modular import BACKEND, ModpEchelon, choose_primes, vector_residues

EXACT = "exact"
MODULAR = "modular"
DEFAULT_PRIME_COUNT = 2


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    mode: str
    primes: tuple[int, ...] = ()
    #: (row indices, column indices) of a nonsingular rank x rank minor (exact mode)
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    mode: str
    primes: tuple[int, ...] = ()
    #: exact coefficients over the spanning vectors, already re-verified
    coefficients: Mapping[Hashable, Fraction] | None = field(default=None, compare=False)

    def __bool__(self):
        return self.member


def _check_mode(mode: str) -> str:
    if mode not in (EXACT, MODULAR):
        raise InputError(f"unknown mode {mode!r}; expected 'exact' or 'modular'")
    return mode


def _as_vectors(obj, n: int | None = None) -> tuple[list[dict[int, Fraction]], int | None]:
    """Columns of a matrix, or a sequence of sparse vectors."""
    if isinstance(obj, SparseRationalMatrix):
        return obj.columns(), obj.rows
    return [clean_vector(v) for v in obj], n


class Span:
    """An incrementally growing span of sparse vectors in Q^n.

    Exact mode keeps one ``ExactEchelon``; modular mode keeps one echelon
    per prime and insists that all primes agree on every rank update.
    """

    def __init__(self, n: int, mode: str = EXACT, primes: Sequence[int] | None = None, seed: int = 0):
        self.n = n
        self.mode = _check_mode(mode)
        self._count = 0     # running label for unlabeled inserted vectors
        if mode == EXACT:
            self.primes: tuple[int, ...] = ()
            self._exact = ExactEchelon(n)
            self._modp = []
        else:
            self.primes = tuple(primes) if primes else tuple(choose_primes(DEFAULT_PRIME_COUNT, seed))
            self._exact = None
            self._modp = [ModpEchelon(n, p) for p in self.primes]

    @property
    def rank(self) -> int:
        return self._exact.rank if self._exact is not None else self._modp[0].rank

    def copy(self) -> "Span":
        out = Span.__new__(Span)
        out.n, out.mode, out.primes, out._count = self.n, self.mode, self.primes, self._count
        out._exact = self._exact.copy() if self._exact is not None else None
        out._modp = [e.copy() for e in self._modp]
        return out

    def add(self, vec: Mapping[int, object], source: Hashable = None) -> bool:
        if source is None:
            source = self._count
        self._count += 1
        if self._exact is not None:
            return self._exact.add(vec, source)
        flags = set()
        for ech in self._modp:
            cols, vals = vector_residues(vec, ech.p)
            flags.add(bool(cols) and ech.add_row(cols, vals))
        if len(flags) != 1:
            raise InconsistencyError(f"primes {self.primes} disagree on independence")
        return flags.pop()

    def extend(self, vectors: Iterable[Mapping[int, object]], sources: Iterable[Hashable] | None = None) -> int:
        """Insert vectors; returns how many were independent."""
        vecs = [clean_vector(v) for v in vectors]
        if sources is None:
            sources = range(self._count, self._count + len(vecs))
        if self._exact is not None:
            self._count += len(vecs)
            return sum(self._exact.extend(vecs, sources))
        return sum(self.add(v, s) for v, s in zip(vecs, sources))

    def contains(self, vec: Mapping[int, object]) -> MembershipResult:
        """Exact mode attaches a coefficient certificate over the inserted vectors."""
        if self._exact is not None:
            coef = self._exact.certificate(vec)
            return MembershipResult(coef is not None, EXACT, (), coef)
        answers = set()
        for ech in self._modp:
            cols, vals = vector_residues(vec, ech.p)
            answers.add(ech.is_member(cols, vals))
        if len(answers) != 1:
            raise InconsistencyError(f"primes {self.primes} disagree on membership")
        return MembershipResult(answers.pop(), MODULAR, self.primes)


def _modular_rank(vectors: list[dict[int, Fraction]], n: int, primes: Sequence[int]) -> int:
    ranks = []
    for p in primes:
        ech = ModpEchelon(n, p)
        for v in vectors:
            cols, vals = vector_residues(v, p)
            if cols:
                ech.add_row(cols, vals)
        ranks.append(ech.rank)
    if len(set(ranks)) != 1:
        raise InconsistencyError(f"modular ranks {ranks} disagree across primes {list(primes)}")
    return ranks[0]


def rank(M: SparseRationalMatrix, mode: str = EXACT, primes: Sequence[int] | None = None,
         seed: int = 0) -> RankCertificate:
    """Rank of M over Q (exact) or a prime-agreement estimate (modular)."""
    _check_mode(mode)
    rows = M.row_vectors()
    if mode == EXACT:
        ech = ExactEchelon(M.cols)
        ech.extend(rows)
        witness = (tuple(sorted(ech.sources())), tuple(sorted(ech.pivot_columns())))
        return RankCertificate(ech.rank, EXACT, (), witness)
    primes = tuple(primes) if primes else tuple(choose_primes(DEFAULT_PRIME_COUNT, seed))
    if len(primes) < 2:
        raise InputError("modular rank needs at least two primes")
    return RankCertificate(_modular_rank(rows, M.cols, primes), MODULAR, primes, None)


def membership(v: Mapping[int, object], M: SparseRationalMatrix, mode: str = EXACT,
               primes: Sequence[int] | None = None, seed: int = 0) -> MembershipResult:
    """Is v in the column span of M?  Exact answers carry verified coefficients."""
    _check_mode(mode)
    v = clean_vector(v)
    if any(not 0 <= k < M.rows for k in v):
        raise InputError(f"vector index outside dimension {M.rows}")
    span = Span(M.rows, mode, primes, seed)
    span.extend(M.columns())
    res = span.contains(v)
    if res.member and res.coefficients is not None:
        if M.matvec(res.coefficients) != v:
            raise InconsistencyError("membership certificate failed exact re-verification")
    return res


def quotient_dim(V, R, mode: str = EXACT, n: int | None = None, primes: Sequence[int] | None = None,
                 seed: int = 0) -> int:
    """rank(V u R) - rank(R): the dimension of the image of span V modulo span R."""
    _check_mode(mode)
    vs, nv = _as_vectors(V, n)
    rs, nr = _as_vectors(R, n)
    if nv is not None and nr is not None and nv != nr:
        raise InputError(f"row dimension mismatch {nv} vs {nr}")
    dim = nv if nv is not None else nr
    if dim is None:
        dim = 1 + max((k for vec in vs + rs for k in vec), default=-1)
    span = Span(dim, mode, primes, seed)
    span.extend(rs)
    return span.extend(vs)


def kernel_basis(M: SparseRationalMatrix) -> list[dict[int, Fraction]]:
    """Right null space of M over Q; each vector re-verified by exact multiplication."""
    ech = ExactEchelon(M.cols)
    ech.extend(M.row_vectors())
    basis = ech.kernel_of_rows()
    for x in basis:
        if M.matvec(x):
            raise InconsistencyError("kernel vector failed exact re-verification")
    return basis


__all__ = [
    "BACKEND", "EXACT", "MODULAR", "ExactEchelon", "MembershipResult", "ModpEchelon", "RankCertificate",
    "Span", "SparseRationalMatrix", "choose_primes", "clean_vector", "kernel_basis", "membership",
    "quotient_dim", "rank", "read_triplets", "write_triplets",
]
