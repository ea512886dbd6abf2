"""Reduced words in the free group on alpha_1, beta_1, ..., alpha_g, beta_g.

Letters are signed generator numbers: generator j (0-based, in the order
alpha_1, beta_1, ..., alpha_g, beta_g) is ``j + 1`` and its inverse is
``-(j + 1)``.  Textual syntax: ``a1 b1 A2`` where a lowercase letter is a
generator and uppercase its inverse; the empty string is the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..errors import InputError, ParameterError
from ..groupring import GroupRingElement
from ..lattice import LatticeParams, ZlVector

_TOKEN = re.compile(r"([abAB])(\d+)")


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    params: LatticeParams
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        n = self.params.rank
        for x in self.letters:
            if not isinstance(x, (int, np.integer)) or x == 0 or abs(x) > n:
                raise InputError(f"letter {x!r} outside the alphabet of rank {n}")
        object.__setattr__(self, "letters", free_reduce(int(x) for x in self.letters))

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, params: LatticeParams) -> "FreeWord":
        return cls(params, ())

    @classmethod
    def generator(cls, params: LatticeParams, j: int) -> "FreeWord":
        """Generator j, 0-based over (alpha_1, beta_1, ..., alpha_g, beta_g)."""
        return cls(params, (j + 1,))

    @classmethod
    def alpha(cls, params: LatticeParams, i: int) -> "FreeWord":
        return cls.generator(params, 2 * (i - 1))

    @classmethod
    def beta(cls, params: LatticeParams, i: int) -> "FreeWord":
        return cls.generator(params, 2 * (i - 1) + 1)

    @classmethod
    def parse(cls, params: LatticeParams, text: str) -> "FreeWord":
        letters = []
        for tok in text.replace(",", " ").split():
            for part in _split_token(tok):
                m = _TOKEN.fullmatch(part)
                if not m:
                    raise InputError(f"cannot parse word token {part!r}")
                ch, num = m.group(1), int(m.group(2))
                if not 1 <= num <= params.g:
                    raise InputError(f"surface index {num} outside 1..{params.g}")
                j = 2 * (num - 1) + (0 if ch.lower() == "a" else 1)
                letters.append(j + 1 if ch.islower() else -(j + 1))
        return cls(params, tuple(letters))

    @classmethod
    def relator(cls, params: LatticeParams) -> "FreeWord":
        """The surface relator prod_i [alpha_i, beta_i]."""
        w = cls.identity(params)
        for i in range(1, params.g + 1):
            w = w * commutator(cls.alpha(params, i), cls.beta(params, i))
        return w

    # -- group operations ------------------------------------------------
    def _check(self, other: "FreeWord"):
        if other.params != self.params:
            raise ParameterError(f"mismatched parameters {self.params} vs {other.params}")

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        self._check(other)
        return FreeWord(self.params, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.params, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(self.params, base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return ""
        out = []
        for x in self.letters:
            j = abs(x) - 1
            ch = "a" if j % 2 == 0 else "b"
            out.append((ch if x > 0 else ch.upper()) + str(j // 2 + 1))
        return " ".join(out)

    # -- abelian invariants --------------------------------------------
    def exponent_sums(self) -> tuple[int, ...]:
        counts = [0] * self.params.rank
        for x in self.letters:
            counts[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(counts)

    def abelianize(self) -> tuple[tuple[int, ...], ZlVector]:
        """Integer exponent-sum vector and its reduction mod L."""
        sums = self.exponent_sums()
        return sums, ZlVector(self.params, sums)

    def image(self) -> ZlVector:
        return ZlVector(self.params, self.exponent_sums())

    def in_kernel(self) -> bool:
        """Trivial mod-L abelianization."""
        return self.image().is_zero()


def _split_token(tok: str) -> list[str]:
    # allow run-together tokens such as "a1B1"
    parts = re.findall(r"[abAB]\d+", tok)
    if "".join(parts) != tok:
        raise InputError(f"cannot parse word token {tok!r}")
    return parts


def commutator(x: FreeWord, y: FreeWord) -> FreeWord:
    """[x, y] = x^-1 y^-1 x y."""
    return x.inverse() * y.inverse() * x * y


def conjugate(a: FreeWord, b: FreeWord) -> FreeWord:
    """a^b = b^-1 a b."""
    return b.inverse() * a * b


def fox_derivative(w: FreeWord, j: int) -> GroupRingElement:
    """d w / d x_j projected to Q[H_L], with the left-action product rule."""
    params = w.params
    L, n = params.L, params.rank
    prefix = [0] * n
    coeffs: dict[ZlVector, Fraction] = {}
    for x in w.letters:
        k = abs(x) - 1
        if x > 0:
            if k == j:
                key = ZlVector(params, prefix)
                coeffs[key] = coeffs.get(key, 0) + 1
            prefix[k] = (prefix[k] + 1) % L
        else:
            prefix[k] = (prefix[k] - 1) % L
            if k == j:
                key = ZlVector(params, prefix)
                coeffs[key] = coeffs.get(key, 0) - 1
    return GroupRingElement(params, coeffs)


def letters_array(words: Sequence[FreeWord], width: int | None = None) -> np.ndarray:
    """Pad words to a common width with the no-op code 0."""
    width = max((len(w) for w in words), default=0) if width is None else width
    out = np.zeros((len(words), width), dtype=np.int8)
    for i, w in enumerate(words):
        if len(w) > width:
            raise InputError(f"word of length {len(w)} exceeds width {width}")
        out[i, :len(w)] = w.letters
    return out


def enumerate_reduced_words(params: LatticeParams, max_len: int) -> list[FreeWord]:
    """All freely reduced words of length <= max_len, shortlex order."""
    n = params.rank
    alphabet = [k for j in range(1, n + 1) for k in (j, -j)]
    layer = [()]
    out = [FreeWord(params, ())]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(FreeWord(params, w) for w in nxt)
        layer = nxt
    return out


def random_word(params: LatticeParams, rng, max_len: int) -> FreeWord:
    n = params.rank
    length = rng.randint(0, max_len)
    letters = [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(length)]
    return FreeWord(params, tuple(letters))
