"""Brute-force coordinate box enumeration, used as an independent oracle.

Every integer point of a box containing the ellipsoid is tested with exact
integer arithmetic (the coset is scaled by its denominator).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil, floor, isqrt, lcm

import numpy as np

from gamma72 import _linalg as la


def _box(L, bound: Fraction, t: list[Fraction]) -> list[range]:
    inv = la.rational_inverse(L.gram)
    out = []
    for i in range(L.rank):
        # |x_i + t_i| <= sqrt(bound * inv_ii)
        r2 = bound * inv[i][i]
        r = Fraction(isqrt(r2.numerator * r2.denominator) + 1, r2.denominator)
        out.append(range(floor(-r - t[i]), ceil(r - t[i]) + 1))
    return out


def box_size(L, bound, t=None) -> int:
    t = [Fraction(0)] * L.rank if t is None else [Fraction(x) for x in t]
    n = 1
    for r in _box(L, Fraction(bound), t):
        n *= len(r)
    return n


def brute_coset(L, t, bound) -> set[tuple[Fraction, ...]]:
    """All v = t + x (x integral) with (v, v) <= bound."""
    t = [Fraction(x) for x in t]
    bound = Fraction(bound)
    G, d = la.scaled_integer(L.gram)
    G = np.array(G, dtype=np.int64)
    den = lcm(*(x.denominator for x in t))
    tn = np.array([int(x * den) for x in t], dtype=np.int64)
    pts = np.array(list(itertools.product(*_box(L, bound, t))), dtype=np.int64)
    v = den * pts + tn
    nrm = np.einsum("ij,jk,ik->i", v, G, v)
    # (v/den)^T (G/d) (v/den) <= bound
    keep = nrm * bound.denominator <= bound.numerator * d * den * den
    return {tuple(Fraction(int(a), den) for a in row) for row in v[keep]}


def brute_short(L, bound) -> set[tuple[int, ...]]:
    pts = brute_coset(L, [0] * L.rank, bound)
    return {tuple(int(a) for a in v) for v in pts if any(v)}
