"""Modular elimination backend selection and prime choice.

The compiled kernel is used when it imports; otherwise the pure-Python
fallback with the identical API.  ``HOMLAB_PURE_PYTHON=1`` forces the
fallback.
"""
from __future__ import annotations

import os
import random
from fractions import Fraction

from sympy import isprime

from ..errors import InputError
from . import _modp_py

PRIME_LOW = 2**30
PRIME_HIGH = 2**31

if os.environ.get("HOMLAB_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from . import _modp as _compiled
    except ImportError:  # extension not built
        _compiled = None

ModpEchelon = _compiled.ModpEchelon if _compiled is not None else _modp_py.ModpEchelon
PyModpEchelon = _modp_py.ModpEchelon
BACKEND = "compiled" if _compiled is not None else "python"


def choose_primes(count: int, seed: int = 0, modulus: int = 1) -> list[int]:
    """``count`` distinct primes in (2^30, 2^31), congruent to 1 mod ``modulus``.

    Deterministic in ``seed``.
    """
    if count < 1:
        raise InputError("need at least one prime")
    rng = random.Random(f"primes:{seed}:{modulus}")
    out: list[int] = []
    while len(out) < count:
        k = rng.randrange(PRIME_LOW // modulus + 1, PRIME_HIGH // modulus)
        p = k * modulus + 1
        if PRIME_LOW < p < PRIME_HIGH and p not in out and isprime(p):
            out.append(p)
    return out


def root_of_unity(L: int, p: int) -> int:
    """A primitive L-th root of unity mod p (requires p = 1 mod L)."""
    if (p - 1) % L:
        raise InputError(f"{p} is not 1 mod {L}")
    prime_factors = [q for q in range(2, L + 1) if L % q == 0 and isprime(q)]
    for h in range(2, p):
        z = pow(h, (p - 1) // L, p)
        if all(pow(z, L // q, p) != 1 for q in prime_factors):
            return z
    raise InputError(f"no primitive {L}-th root mod {p}")


def to_residue(v, p: int) -> int:
    """Image of a rational number in F_p; fails if p divides the denominator."""
    v = Fraction(v)
    if v.denominator % p == 0:
        raise InputError(f"prime {p} divides denominator {v.denominator}")
    return v.numerator * pow(v.denominator, -1, p) % p


def vector_residues(vec, p: int) -> tuple[list[int], list[int]]:
    cols = sorted(vec)
    return cols, [to_residue(vec[c], p) for c in cols]


def echelon_from_vectors(ncols: int, vectors, p: int, backend=None):
    """Build an echelon over F_p from sparse vectors; returns (echelon, independence mask)."""
    cls = backend or ModpEchelon
    ech = cls(ncols, p)
    mask = []
    for vec in vectors:
        cols, vals = vector_residues(vec, p)
        mask.append(ech.add_row(cols, vals) if cols else False)
    return ech, mask
