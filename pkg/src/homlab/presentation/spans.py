"""Spans in the free module on the generators of A_g.

``ExactFreeSpan`` eliminates over Q and answers membership with a
coefficient certificate that is re-verified by exact multiplication
against the stored input rows.  ``BlockFreeSpan`` works over F_p for two
primes, one character block at a time; it can only hold
translation-closed families.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import InconsistencyError, InputError
from ..linalg import EXACT, MODULAR, ExactEchelon
from ..linalg.equivariant import CharacterBlockSpan, TemplateRows
from .space import FAMILIES, Presentation


class NotTranslationClosed(InputError):
    """A modular span was asked to hold a family that is not translation-closed."""


class ExactFreeSpan:
    mode = EXACT
    primes: tuple[int, ...] = ()

    def __init__(self, pres: Presentation):
        self.pres = pres
        self._ech = ExactEchelon(pres.n_generators)
        self._store: dict = {}
        self.certificates = 0

    @property
    def rank(self) -> int:
        return self._ech.rank

    def copy(self) -> "ExactFreeSpan":
        out = ExactFreeSpan.__new__(ExactFreeSpan)
        out.pres = self.pres
        out._ech = self._ech.copy()
        out._store = dict(self._store)
        out.certificates = 0
        return out

    def _insert(self, labelled: Iterable[tuple[object, dict]]) -> int:
        items = list(labelled)
        for lab, row in items:
            self._store[lab] = row
        return sum(self._ech.extend([r for _, r in items], [lab for lab, _ in items]))

    def add_relations(self, families=FAMILIES) -> int:
        return self._insert(self.pres.relation_rows(families))

    def add_columns(self, cols: Iterable[int]) -> int:
        return self._insert((("X", c), {c: 1}) for c in cols)

    def add_labels(self, labels: Iterable[int]) -> int:
        m = self.pres.n_pairs
        return self.add_columns(v * m + k for k in labels for v in range(self.pres.params.size))

    def contains(self, vec: Mapping[int, object]) -> bool:
        """Exact membership; a positive answer is certified by re-multiplication."""
        coef = self._ech.certificate(vec)
        if coef is None:
            return False
        total: dict[int, Fraction] = {}
        for lab, c in coef.items():
            for k, x in self._store[lab].items():
                total[k] = total.get(k, 0) + c * x
        want = {k: Fraction(x) for k, x in vec.items() if x}
        if {k: x for k, x in total.items() if x} != want:
            raise InconsistencyError("membership certificate failed exact re-verification")
        self.certificates += 1
        return True


class BlockFreeSpan:
    mode = MODULAR

    def __init__(self, pres: Presentation, seed: int = 0, primes=None):
        self.pres = pres
        self._span = CharacterBlockSpan(pres.params, pres.n_pairs, primes, seed)
        self.certificates = 0

    @property
    def primes(self) -> tuple[int, ...]:
        return self._span.primes

    @property
    def rank(self) -> int:
        return self._span.rank

    def copy(self) -> "BlockFreeSpan":
        out = BlockFreeSpan.__new__(BlockFreeSpan)
        out.pres = self.pres
        out._span = self._span.copy()
        out.certificates = 0
        return out

    def add_relations(self, families=FAMILIES) -> int:
        return self._span.extend_templates(self.pres.template_rows(families))

    def add_templates(self, templates) -> int:
        return self._span.extend_templates(TemplateRows(templates))

    def add_labels(self, labels: Iterable[int]) -> int:
        return self._span.extend_labels(list(labels))

    def add_columns(self, cols: Iterable[int]) -> int:
        cols = set(cols)
        m, N = self.pres.n_pairs, self.pres.params.size
        labels = {c % m for c in cols}
        if len(cols) != N * len(labels):
            raise NotTranslationClosed("block spans only hold translation-closed column sets")
        return self.add_labels(sorted(labels))

    def contains(self, vec: Mapping[int, object]) -> bool:
        return self._span.contains(vec)
