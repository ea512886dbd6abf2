"""The rational group ring Q[H_L] and the formal-symbol space B_g.

One concrete type serves both: the basis element rho[v] of B_g is the
group element v.  Coefficients are exact Fractions keyed by vector index
(see ``lattice`` for the index order); zero coefficients are never stored.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError, ParameterError
from .lattice import LatticeParams, ZlVector, coords_to_index, index_to_coords, is_isotropic, is_unimodular
from .linalg.matrix import atomic_write_text


def _translate_index(params: LatticeParams, i: int, shift: tuple[int, ...]) -> int:
    L = params.L
    c = index_to_coords(i, L, params.rank)
    return coords_to_index([(a + b) % L for a, b in zip(c, shift)], L)


class GroupRingElement:
    __slots__ = ("params", "_c")

    def __init__(self, params: LatticeParams, coeffs: Mapping[int, object] | None = None):
        self.params = params
        data: dict[int, Fraction] = {}
        for k, v in (coeffs or {}).items():
            if isinstance(k, ZlVector):
                if k.params != params:
                    raise ParameterError(f"mismatched parameters {k.params} vs {params}")
                k = k.index
            if not 0 <= k < params.size:
                raise InputError(f"index {k} out of range for {params}")
            v = data.get(k, 0) + Fraction(v)
            if v:
                data[k] = v
            else:
                data.pop(k, None)
        self._c = data

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, params: LatticeParams) -> "GroupRingElement":
        return cls(params)

    @classmethod
    def _raw(cls, params: LatticeParams, data: dict[int, Fraction]) -> "GroupRingElement":
        out = cls.__new__(cls)
        out.params = params
        out._c = {k: v for k, v in data.items() if v}
        return out

    # -- access ---------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def coeff(self, v: ZlVector | int) -> Fraction:
        k = v.index if isinstance(v, ZlVector) else v
        return self._c.get(k, Fraction(0))

    def support(self) -> list[ZlVector]:
        return [ZlVector.from_index(self.params, k) for k in sorted(self._c)]

    def is_zero(self) -> bool:
        return not self._c

    def _same(self, other: "GroupRingElement"):
        if other.params != self.params:
            raise ParameterError(f"mismatched parameters {self.params} vs {other.params}")

    # -- vector space structure --------------------------------------
    def __add__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._same(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return GroupRingElement._raw(self.params, out)

    def __neg__(self):
        return GroupRingElement._raw(self.params, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self + (-other)

    def scale(self, q) -> "GroupRingElement":
        q = Fraction(q)
        return GroupRingElement._raw(self.params, {k: q * v for k, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return self.convolve(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- ring structure -----------------------------------------------
    def translate(self, u: ZlVector) -> "GroupRingElement":
        """Left multiplication by the group element u."""
        if u.params != self.params:
            raise ParameterError(f"mismatched parameters {self.params} vs {u.params}")
        return GroupRingElement._raw(
            self.params, {_translate_index(self.params, k, u.coords): v for k, v in self._c.items()})

    def convolve(self, other: "GroupRingElement") -> "GroupRingElement":
        self._same(other)
        L, n = self.params.L, self.params.rank
        out: dict[int, Fraction] = {}
        for k, a in self._c.items():
            shift = index_to_coords(k, L, n)
            for j, b in other._c.items():
                t = _translate_index(self.params, j, shift)
                out[t] = out.get(t, 0) + a * b
        return GroupRingElement._raw(self.params, out)

    def augmentation(self) -> Fraction:
        return sum(self._c.values(), Fraction(0))

    def decompose(self) -> tuple["GroupRingElement", "GroupRingElement"]:
        """Split as (eps/|G|) * theta + ideal part, the ideal part having augmentation 0."""
        trivial = theta(self.params).scale(self.augmentation() / self.params.size)
        return trivial, self - trivial

    # -- comparison and io ---------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.params == other.params and self._c == other._c

    def __hash__(self):
        return hash((self.params, frozenset(self._c.items())))

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for k in sorted(self._c):
            label = ZlVector.from_index(self.params, k).label()
            terms.append(f"{self._c[k]}*rho[{label}]")
        return " + ".join(terms)

    def dumps(self) -> str:
        lines = [f"{self.params.g} {self.params.L} {len(self._c)}"]
        for k in sorted(self._c):
            v = self._c[k]
            lines.append(f"{k} {v.numerator} {v.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "GroupRingElement":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InputError("empty group ring document")
        try:
            g, L, nnz = (int(t) for t in lines[0].split())
            entries = {}
            for ln in lines[1:]:
                k, num, den = (int(t) for t in ln.split())
                if k in entries:
                    raise InputError(f"duplicate index {k}")
                entries[k] = Fraction(num, den)
        except ValueError as exc:
            raise InputError(f"malformed group ring document: {exc}") from exc
        if len(entries) != nnz:
            raise InputError(f"header announces {nnz} entries, found {len(entries)}")
        return cls(LatticeParams(g, L), entries)

    def write(self, path) -> None:
        atomic_write_text(path, self.dumps())


def rho(v: ZlVector, coef=1) -> GroupRingElement:
    """The basis symbol rho[v] (the group element v)."""
    return GroupRingElement._raw(v.params, {v.index: Fraction(coef)})


def theta(params: LatticeParams) -> GroupRingElement:
    """The sum of all group elements."""
    return GroupRingElement._raw(params, {k: Fraction(1) for k in range(params.size)})


def linear_combination(params: LatticeParams, terms: Iterable[tuple[int, ZlVector]]) -> GroupRingElement:
    out: dict[int, Fraction] = {}
    for c, v in terms:
        out[v.index] = out.get(v.index, 0) + Fraction(c)
    return GroupRingElement._raw(params, out)


def four_term(f: ZlVector, y: ZlVector, z: ZlVector) -> GroupRingElement:
    """rho[f] - rho[f+y] - rho[f+z] + rho[f+y+z]."""
    return linear_combination(f.params, [(1, f), (-1, f + y), (-1, f + z), (1, f + y + z)])


def psi_image(v: ZlVector, w1: ZlVector, w2: ZlVector, check: bool = True) -> GroupRingElement:
    """Image of the generator X(v, w1, w2) in B_g.

    ``check=False`` skips the isotropic/unimodular precondition; only for
    assembling relation rows whose pairs are valid by construction.
    """
    if check:
        if w1 == w2 or not is_isotropic([w1, w2]) or not is_unimodular([w1, w2]):
            raise InputError(f"{{{w1.label()}, {w2.label()}}} is not an isotropic unimodular pair")
    return four_term(v, w1, w2)


def boundary_T2(f: ZlVector, y: ZlVector, z: ZlVector) -> GroupRingElement:
    """Formal boundary of a T2 class; same formula as psi_image without preconditions."""
    return four_term(f, y, z)


def boundary_T3(f: ZlVector, x: ZlVector, y: ZlVector, z: ZlVector) -> GroupRingElement:
    """sum_{k=0}^{L-1} (rho[f + kx + y] - rho[f + kx + y + z])."""
    terms = []
    for k in range(f.params.L):
        base = f + k * x + y
        terms.append((1, base))
        terms.append((-1, base + z))
    return linear_combination(f.params, terms)


def verify_case3_cancellation(params: LatticeParams, f: ZlVector, y: ZlVector, z: ZlVector) -> bool:
    """sum_{k=0}^{L-1} boundary_T2(f + k*y, y, z) == 0."""
    total = GroupRingElement.zero(params)
    for k in range(params.L):
        total = total + boundary_T2(f + k * y, y, z)
    return total.is_zero()


def verify_case4_telescoping(params: LatticeParams, f: ZlVector, x: ZlVector, y: ZlVector,
                             z: ZlVector) -> bool:
    """sum_{k=0}^{L-1} boundary_T3(f + k*z, x, y, z) == 0."""
    total = GroupRingElement.zero(params)
    for k in range(params.L):
        total = total + boundary_T3(f + k * z, x, y, z)
    return total.is_zero()
